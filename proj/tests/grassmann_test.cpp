#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "supercone/grassmann.hpp"
#include "supercone/random.hpp"

namespace sc = supercone;
using sc::Complex;
using sc::Multivector;

namespace {

// Product of two monomials by writing out the generator word and bubble
// sorting it, counting transpositions; independent of the bitmask sign rule.
Multivector word_product(const Multivector& a, const Multivector& b) {
  const int m = a.m();
  Multivector out(m);
  for (sc::Mask s = 0; s < a.size(); ++s) {
    for (sc::Mask t = 0; t < b.size(); ++t) {
      if (a[s] == Complex{} || b[t] == Complex{}) continue;
      std::vector<int> word;
      for (int i = 0; i < m; ++i) {
        if (s >> i & 1) word.push_back(i);
      }
      for (int i = 0; i < m; ++i) {
        if (t >> i & 1) word.push_back(i);
      }
      int swaps = 0;
      bool repeated = false;
      for (std::size_t i = 0; i < word.size(); ++i) {
        for (std::size_t j = 0; j + 1 < word.size() - i; ++j) {
          if (word[j] == word[j + 1]) repeated = true;
          if (word[j] > word[j + 1]) {
            std::swap(word[j], word[j + 1]);
            ++swaps;
          }
        }
      }
      if (repeated || (s & t)) continue;
      out[s | t] += (swaps % 2 ? -1.0 : 1.0) * a[s] * b[t];
    }
  }
  return out;
}

Multivector theta(int m, int a) { return Multivector::generator(m, a - 1); }

}  // namespace

TEST(Grassmann, GeneratorsAnticommute) {
  const auto t1 = theta(2, 1), t2 = theta(2, 2);
  EXPECT_EQ(t1 * t2, Multivector::monomial(2, 0b11));
  EXPECT_EQ(t2 * t1, Multivector::monomial(2, 0b11, -1.0));
  EXPECT_TRUE((t1 * t1).is_zero());
}

TEST(Grassmann, UnitIsNeutral) {
  sc::Rng rng(1);
  for (int m = 0; m <= 4; ++m) {
    const auto f = sc::random_integer_multivector(rng, m);
    EXPECT_EQ(Multivector::scalar(m, 1.0) * f, f);
    EXPECT_EQ(f * Multivector::scalar(m, 1.0), f);
  }
}

TEST(Grassmann, SumTimesDifference) {
  const auto t1 = theta(2, 1), t2 = theta(2, 2);
  EXPECT_EQ((t1 + t2) * (t1 - t2), Multivector::monomial(2, 0b11, -2.0));
}

TEST(Grassmann, MismatchedGeneratorCountsThrow) {
  EXPECT_THROW(sc::mul(Multivector(2), Multivector(3)), sc::DimensionError);
  EXPECT_THROW(Multivector(2) + Multivector(3), sc::DimensionError);
  EXPECT_THROW(Multivector(13), sc::RangeError);
}

TEST(Grassmann, ProductMatchesWordOracleExhaustively) {
  // every pair of monomials for m <= 3
  for (int m = 0; m <= 3; ++m) {
    for (sc::Mask s = 0; s < (sc::Mask{1} << m); ++s) {
      for (sc::Mask t = 0; t < (sc::Mask{1} << m); ++t) {
        const auto a = Multivector::monomial(m, s), b = Multivector::monomial(m, t);
        EXPECT_EQ(a * b, word_product(a, b)) << "m=" << m << " s=" << s << " t=" << t;
      }
    }
  }
  sc::Rng rng(2);
  for (int k = 0; k < 200; ++k) {
    const int m = sc::uniform_int(rng, 0, 6);
    const auto a = sc::random_integer_multivector(rng, m), b = sc::random_integer_multivector(rng, m);
    EXPECT_EQ(a * b, word_product(a, b));
  }
}

TEST(Grassmann, AssociativityExact) {
  for (int m = 0; m <= 3; ++m) {
    const sc::Mask n = sc::Mask{1} << m;
    for (sc::Mask s = 0; s < n; ++s) {
      for (sc::Mask t = 0; t < n; ++t) {
        for (sc::Mask u = 0; u < n; ++u) {
          const auto a = Multivector::monomial(m, s), b = Multivector::monomial(m, t),
                     c = Multivector::monomial(m, u);
          EXPECT_EQ((a * b) * c, a * (b * c));
        }
      }
    }
  }
  sc::Rng rng(3);
  for (int k = 0; k < 300; ++k) {
    const int m = sc::uniform_int(rng, 0, 6);
    const auto a = sc::random_integer_multivector(rng, m), b = sc::random_integer_multivector(rng, m),
               c = sc::random_integer_multivector(rng, m);
    EXPECT_EQ((a * b) * c, a * (b * c));
  }
}

TEST(Grassmann, GradedCommutativity) {
  sc::Rng rng(4);
  for (int k = 0; k < 300; ++k) {
    const int m = sc::uniform_int(rng, 0, 6);
    const int p = sc::uniform_int(rng, 0, m), q = sc::uniform_int(rng, 0, m);
    const auto a = sc::random_homogeneous(rng, m, p), b = sc::random_homogeneous(rng, m, q);
    EXPECT_EQ(a * b, ((p * q) % 2 ? -1.0 : 1.0) * (b * a));
  }
}

TEST(Grassmann, DaggerExamples) {
  EXPECT_EQ(sc::dagger(theta(2, 1)), theta(2, 1));
  EXPECT_EQ(sc::dagger(Multivector::monomial(2, 0b11)), Multivector::monomial(2, 0b11, -1.0));
  EXPECT_EQ(sc::dagger(Multivector::monomial(4, 0b1111)), Multivector::monomial(4, 0b1111));
}

TEST(Grassmann, DaggerInvolutionAndAntilinear) {
  sc::Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const int m = sc::uniform_int(rng, 0, 6);
    const auto f = sc::random_integer_multivector(rng, m);
    EXPECT_EQ(sc::dagger(sc::dagger(f)), f);
    const Complex lambda(sc::uniform_int(rng, -3, 3), sc::uniform_int(rng, -3, 3));
    EXPECT_EQ(sc::dagger(lambda * f), std::conj(lambda) * sc::dagger(f));
  }
}

TEST(Grassmann, HermiteanExamples) {
  // f0 + f_a θ^a − (i/2) f12 ε_ab θ^a θ^b with real f
  Multivector f(2);
  f[0] = 1.5;
  f[1] = -2.0;
  f[2] = 0.25;
  f[3] = Complex(0.0, -3.0);
  EXPECT_TRUE(sc::is_hermitean(f));
  EXPECT_FALSE(sc::is_hermitean(Multivector::monomial(2, 0b11)));
  EXPECT_TRUE(sc::is_hermitean(Multivector::monomial(2, 0b11, Complex(0.0, 1.0))));
}

TEST(Grassmann, ProductOfHermiteanNeedNotBeHermitean) {
  const auto prod = theta(2, 1) * theta(2, 2);
  EXPECT_TRUE(sc::is_hermitean(theta(2, 1)));
  EXPECT_TRUE(sc::is_hermitean(theta(2, 2)));
  EXPECT_FALSE(sc::is_hermitean(prod));
  EXPECT_EQ(sc::dagger(prod), -prod);
}

TEST(Grassmann, BodySoulGrade) {
  const auto f = Multivector::scalar(1, 3.0) + theta(1, 1);
  EXPECT_EQ(sc::body(f), Complex(3.0));
  EXPECT_EQ(sc::soul(f), theta(1, 1));
  EXPECT_EQ(sc::grade(Multivector::monomial(2, 0b11), 2), Multivector::monomial(2, 0b11));
  const auto g = Multivector::scalar(2, 1.0) + theta(2, 1) + Multivector::monomial(2, 0b11, 5.0);
  EXPECT_EQ(sc::grade(g, 1), theta(2, 1));
  EXPECT_THROW(sc::grade(g, 3), sc::RangeError);
  EXPECT_THROW(sc::grade(g, -1), sc::RangeError);

  sc::Rng rng(6);
  const auto h = sc::random_integer_multivector(rng, 4);
  Multivector sum(4);
  for (int k = 0; k <= 4; ++k) sum += sc::grade(h, k);
  EXPECT_EQ(sum, h);
  EXPECT_EQ(Multivector::scalar(4, sc::body(h)) + sc::soul(h), h);
}

TEST(Grassmann, BerezinSignConvention) {
  EXPECT_EQ(sc::berezin(Multivector::monomial(2, 0b11)), Complex(1.0));
  EXPECT_EQ(sc::berezin(Multivector::scalar(2, 1.0) + theta(2, 1)), Complex(0.0));
  EXPECT_EQ(sc::berezin(7.0 * theta(3, 2) * theta(3, 1) * theta(3, 3)), Complex(-7.0));
  // berezin equals ∂θᵐ ⋯ ∂θ¹ applied from the left
  sc::Rng rng(7);
  for (int m = 1; m <= 5; ++m) {
    const auto f = sc::random_integer_multivector(rng, m);
    Multivector g = f;
    for (int a = 0; a < m; ++a) g = sc::left_derivative(g, a);
    EXPECT_EQ(sc::berezin(f), sc::body(g));
  }
}

TEST(Grassmann, BerezinOfLowGradeProductVanishes) {
  sc::Rng rng(8);
  for (int k = 0; k < 100; ++k) {
    const int m = sc::uniform_int(rng, 2, 6);
    const auto g = sc::random_homogeneous(rng, m, sc::uniform_int(rng, 0, m - 2));
    EXPECT_EQ(sc::berezin(theta(m, sc::uniform_int(rng, 1, m)) * g), Complex{});
  }
}

TEST(Grassmann, DerivativesAreGradedDerivations) {
  sc::Rng rng(9);
  for (int k = 0; k < 100; ++k) {
    const int m = sc::uniform_int(rng, 1, 5), a = sc::uniform_int(rng, 0, m - 1);
    const int p = sc::uniform_int(rng, 0, m);
    const auto f = sc::random_homogeneous(rng, m, p), g = sc::random_integer_multivector(rng, m);
    const double sign = p % 2 ? -1.0 : 1.0;
    EXPECT_EQ(sc::left_derivative(f * g, a), sc::left_derivative(f, a) * g + sign * (f * sc::left_derivative(g, a)));
    const int q = sc::uniform_int(rng, 0, m);
    const auto h = sc::random_homogeneous(rng, m, q);
    const double qsign = q % 2 ? -1.0 : 1.0;
    EXPECT_EQ(sc::right_derivative(g * h, a),
              g * sc::right_derivative(h, a) + qsign * (sc::right_derivative(g, a) * h));
  }
}

TEST(Grassmann, SubstitutionIsAHomomorphism) {
  sc::Rng rng(10);
  for (int k = 0; k < 50; ++k) {
    const int m = sc::uniform_int(rng, 1, 4);
    Eigen::MatrixXcd sub(m, m);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) sub(r, c) = sc::uniform_int(rng, -2, 2);
    }
    const auto f = sc::random_integer_multivector(rng, m), g = sc::random_integer_multivector(rng, m);
    EXPECT_EQ(sc::substitute(f * g, sub), sc::substitute(f, sub) * sc::substitute(g, sub));
  }
  // top monomial picks up the determinant
  Eigen::MatrixXcd sub(2, 2);
  sub << 2.0, 1.0, 3.0, 5.0;
  EXPECT_EQ(sc::substitute(Multivector::monomial(2, 0b11), sub), Multivector::monomial(2, 0b11, 7.0));
}

TEST(Grassmann, InverseAndSquareRoot) {
  sc::Rng rng(11);
  for (int k = 0; k < 50; ++k) {
    const int m = sc::uniform_int(rng, 0, 6);
    auto f = sc::random_integer_multivector(rng, m);
    f[0] = Complex(sc::uniform_int(rng, 1, 4), 0.0);
    EXPECT_LT(sc::max_abs_diff(f * sc::inverse(f), Multivector::scalar(m, 1.0)), 1e-12);
    Multivector even(m);
    for (sc::Mask s = 0; s < f.size(); ++s) {
      if (sc::grade_of(s) % 2 == 0) even[s] = f[s];
    }
    const auto r = sc::sqrt_even(even);
    EXPECT_LT(sc::max_abs_diff(r * r, even), 1e-12);
  }
  EXPECT_THROW(sc::inverse(theta(2, 1)), sc::ContractViolation);
}

TEST(Grassmann, JsonRoundTrip) {
  sc::Rng rng(12);
  const auto f = sc::random_multivector(rng, 4);
  EXPECT_EQ(sc::multivector_from_json(sc::to_json(f)), f);
  const auto j = sc::to_json(theta(3, 2));
  ASSERT_EQ(j["terms"].size(), 1u);
  EXPECT_EQ(j["terms"][0]["mask"], 2);
  EXPECT_EQ(j["m"], 3);
  EXPECT_THROW(sc::multivector_from_json(nlohmann::json{{"m", 2}, {"terms", {{{"mask", 9}}}}}), sc::SchemaError);
  EXPECT_THROW(sc::multivector_from_json(nlohmann::json{{"terms", nlohmann::json::array()}}), sc::SchemaError);
}
