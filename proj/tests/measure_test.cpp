#include <gtest/gtest.h>

#include "supercone/clifford.hpp"
#include "supercone/measure.hpp"
#include "supercone/random.hpp"
#include "supercone/supermatrix.hpp"

namespace sc = supercone;
using sc::Complex;
using sc::Multivector;
using sc::SuperForm;

namespace {

Multivector field(double f0, double f1, double f2, double f12) {
  Multivector f(2);
  f[0] = f0;
  f[1] = f1;
  f[2] = f2;
  f[3] = Complex(0.0, -f12);
  return f;
}

Eigen::MatrixXd identity(int m) { return Eigen::MatrixXd::Identity(m, m); }

}  // namespace

TEST(Measure, StarTableWithFlatMetric) {
  const auto t1 = Multivector::generator(2, 0), t2 = Multivector::generator(2, 1);
  const auto one = Multivector::scalar(2, 1.0);
  EXPECT_EQ(sc::vertical_star(t1, t1, identity(2)), one);
  EXPECT_EQ(sc::vertical_star(t2, t2, identity(2)), one);
  EXPECT_EQ(sc::vertical_star(t1, t2, identity(2)), t1 * t2);
  EXPECT_EQ(sc::vertical_star(t2, t1, identity(2)), -(t1 * t2));
}

TEST(Measure, StarUsesInverseMetric) {
  Eigen::MatrixXd eta(2, 2);
  eta << 2.0, 0.0, 0.0, 1.0;
  const auto t1 = Multivector::generator(2, 0);
  EXPECT_EQ(sc::vertical_star(t1, t1, eta), Multivector::scalar(2, 0.5));
}

TEST(Measure, BodyOnlyFactorGivesOrdinaryProduct) {
  sc::Rng rng(41);
  const Eigen::MatrixXd eta = sc::random_spd(rng, 3);
  const auto g = sc::random_multivector(rng, 3);
  const auto c = Multivector::scalar(3, Complex(1.5, -0.5));
  EXPECT_LT(sc::max_abs_diff(sc::vertical_star(c, g, eta), c * g), 1e-15);
  EXPECT_LT(sc::max_abs_diff(sc::vertical_star(g, c, eta), g * c), 1e-15);
}

TEST(Measure, StarIsAssociative) {
  sc::Rng rng(42);
  for (int m = 1; m <= 4; ++m) {
    for (int k = 0; k < 20; ++k) {
      const Eigen::MatrixXd eta = sc::random_spd(rng, m);
      const auto f = sc::random_multivector(rng, m), g = sc::random_multivector(rng, m),
                 h = sc::random_multivector(rng, m);
      const auto left = sc::vertical_star(sc::vertical_star(f, g, eta), h, eta);
      const auto right = sc::vertical_star(f, sc::vertical_star(g, h, eta), eta);
      EXPECT_LT(sc::max_abs_diff(left, right), 1e-11 * (1.0 + left.max_abs())) << "m=" << m;
    }
  }
}

TEST(Measure, StarMatchesMatrixOracle) {
  sc::Rng rng(43);
  for (int m : {2, 4}) {
    for (int k = 0; k < 100; ++k) {
      const auto f = sc::random_multivector(rng, m), g = sc::random_multivector(rng, m);
      EXPECT_LT(sc::max_abs_diff(sc::vertical_star(f, g, identity(m)), sc::star_matrix(f, g, sc::gamma_rep(m))),
                1e-12);
    }
  }
}

TEST(Measure, SingularMetricIsRejected) {
  const auto f = Multivector::generator(2, 0);
  EXPECT_THROW(sc::vertical_star(f, f, Eigen::MatrixXd::Zero(2, 2)), sc::DegenerateMetric);
  EXPECT_THROW(sc::vertical_star(f, f, identity(3)), sc::DimensionError);
  EXPECT_THROW(sc::make_laboratory(-identity(2)), sc::DegenerateMetric);
}

TEST(Measure, FlatInnerProductFourTerms) {
  const auto lab = sc::make_laboratory(identity(2));
  const auto f = field(0.3, -1.1, 2.0, 0.7), g = field(1.9, 0.4, -0.6, -2.2);
  EXPECT_NEAR(sc::lab_inner(f, g, lab), 0.3 * 1.9 + -1.1 * 0.4 + 2.0 * -0.6 + 0.7 * -2.2, 1e-14);
  EXPECT_EQ(sc::lab_inner(Multivector::scalar(2, 1.0), Multivector::scalar(2, 1.0), lab), 1.0);
  EXPECT_THROW(sc::lab_inner(Multivector::monomial(2, 3), f, lab), sc::ContractViolation);
}

TEST(Measure, GeneralMetricInnerProduct) {
  // φ² + φ_a η^{ab} φ_b + φ̄²/det η for Φ = φ + φ_aθ^a − iφ̄θ¹θ²
  sc::Rng rng(44);
  for (int k = 0; k < 50; ++k) {
    const Eigen::MatrixXd eta = sc::random_spd(rng, 2);
    const auto lab = sc::make_laboratory(eta);
    const double f0 = sc::normal(rng), f12 = sc::normal(rng);
    const Eigen::Vector2d fa(sc::normal(rng), sc::normal(rng));
    const auto phi = field(f0, fa(0), fa(1), f12);
    const double want = f0 * f0 + fa.dot(eta.inverse() * fa) + f12 * f12 / eta.determinant();
    EXPECT_NEAR(sc::lab_inner(phi, phi, lab), want, 1e-12 * (1.0 + want));
  }
}

TEST(Measure, FrameTransportIntertwinesStar) {
  sc::Rng rng(45);
  for (int m = 2; m <= 4; ++m) {
    const Eigen::MatrixXd eta = sc::random_spd(rng, m);
    const auto lab = sc::make_laboratory(eta);
    EXPECT_LT((lab.frame.transpose() * lab.frame - eta).cwiseAbs().maxCoeff(), 1e-12);
    const auto f = sc::random_multivector(rng, m), g = sc::random_multivector(rng, m);
    const auto raw = sc::to_frame(sc::vertical_star(f, g, eta), lab.frame);
    const auto framed = sc::vertical_star(sc::to_frame(f, lab.frame), sc::to_frame(g, lab.frame), identity(m));
    EXPECT_LT(sc::max_abs_diff(raw, framed), 1e-12 * (1.0 + raw.max_abs()));
    EXPECT_LT(sc::max_abs_diff(sc::from_frame(sc::to_frame(f, lab.frame), lab.frame), f), 1e-12);
  }
}

TEST(Measure, InnerProductIsPositive) {
  sc::Rng rng(46);
  for (int m = 1; m <= 4; ++m) {
    for (int k = 0; k < 50; ++k) {
      const auto lab = sc::make_laboratory(sc::random_spd(rng, m));
      const auto f = sc::random_hermitean(rng, m);
      EXPECT_GT(sc::lab_inner(f, f, lab), 0.0);
    }
  }
}

TEST(Measure, IndicatorsResolveUnity) {
  const auto ind = sc::indicators_m2();
  Multivector total(2);
  for (const auto& x : ind.X) total += x;
  EXPECT_EQ(total, Multivector::scalar(2, 1.0));
  const auto lab = sc::make_laboratory(identity(2));
  for (int i = 0; i < 4; ++i) {
    EXPECT_TRUE(sc::is_hermitean(ind.X[i]));
    EXPECT_TRUE(sc::is_hermitean(ind.psi[i]));
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(sc::lab_inner(ind.psi[i], ind.X[j], lab), i == j ? 1.0 : 0.0, 1e-14);
  }
}

TEST(Measure, ExpectationOfBodyOnlyObservable) {
  sc::Rng rng(47);
  const auto lab = sc::make_laboratory(sc::random_spd(rng, 2));
  const auto phi = sc::random_hermitean(rng, 2);
  EXPECT_NEAR(sc::expectation(Multivector::scalar(2, 2.5), phi, lab), 2.5, 1e-13);
  EXPECT_THROW(sc::expectation(Multivector::scalar(2, 1.0), Multivector(2), lab), sc::ZeroNorm);
}

TEST(Measure, ExpectationIsBodyPlusWeightedSoul) {
  // ⟨X⟩ = x₀ + μ⃗·x⃗ with μ⃗ = 2 f₀ (f₁, f₂, f₁₂)/‖F‖²
  sc::Rng rng(48);
  const auto lab = sc::make_laboratory(identity(2));
  for (int k = 0; k < 50; ++k) {
    double f[4], x[4];
    for (int j = 0; j < 4; ++j) {
      f[j] = sc::normal(rng);
      x[j] = sc::normal(rng);
    }
    const double norm2 = f[0] * f[0] + f[1] * f[1] + f[2] * f[2] + f[3] * f[3];
    const double want = x[0] + 2.0 * f[0] * (f[1] * x[1] + f[2] * x[2] + f[3] * x[3]) / norm2;
    EXPECT_NEAR(sc::expectation(field(x[0], x[1], x[2], x[3]), field(f[0], f[1], f[2], f[3]), lab), want, 1e-12);
  }
}

TEST(Measure, IndicatorExpectationsAreBounded) {
  sc::Rng rng(49);
  const auto lab = sc::make_laboratory(identity(2));
  const auto ind = sc::indicators_m2();
  for (int k = 0; k < 1000; ++k) {
    const auto phi = sc::random_hermitean(rng, 2);
    double sum = 0.0;
    for (const auto& x : ind.X) {
      const double p = sc::expectation(x, phi, lab);
      EXPECT_GE(p, -1e-12);
      EXPECT_LE(p, 0.5 + 1e-12);
      sum += p;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Measure, StarSquareOfTwoBitState) {
  // Φ⋆Φ = φ² + φ₁² + φ₂² + φ̄² + 2φ(φ₁θ¹ + φ₂θ²) − 2iφφ̄θ¹θ²
  const double f = 0.8, f1 = -0.3, f2 = 1.2, fb = 0.45;
  const auto sq = sc::star_square(field(f, f1, f2, fb), identity(2));
  Multivector want(2);
  want[0] = f * f + f1 * f1 + f2 * f2 + fb * fb;
  want[1] = 2.0 * f * f1;
  want[2] = 2.0 * f * f2;
  want[3] = Complex(0.0, -2.0 * f * fb);
  EXPECT_LT(sc::max_abs_diff(sq, want), 1e-15);
}

TEST(Measure, StateMembership) {
  sc::Rng rng(50);
  EXPECT_TRUE(sc::is_state(Multivector::scalar(2, 1.0), identity(2)));
  EXPECT_FALSE(sc::is_state(Multivector::scalar(2, -1.0), identity(2)));
  EXPECT_FALSE(sc::is_state(Multivector::scalar(3, -0.5), identity(3)));
  for (int m = 1; m <= 4; ++m) {
    for (int k = 0; k < 30; ++k) {
      const Eigen::MatrixXd eta = sc::random_spd(rng, m);
      const auto a = sc::star_square(sc::random_hermitean(rng, m), eta);
      const auto b = sc::star_square(sc::random_hermitean(rng, m), eta);
      EXPECT_TRUE(sc::is_state(a, eta, 1e-10)) << "m=" << m;
      EXPECT_TRUE(sc::is_state(a + b, eta, 1e-10)) << "m=" << m;
      EXPECT_TRUE(sc::is_state(2.5 * a, eta, 1e-10)) << "m=" << m;
    }
  }
  // pure soul has a zero-trace spectrum, so it has a negative eigenvalue
  EXPECT_FALSE(sc::is_state(Multivector::generator(2, 0), identity(2)));
}

TEST(Measure, SuperdeterminantBlockExamples) {
  Eigen::MatrixXd w(2, 2), a = Eigen::MatrixXd::Zero(2, 2);
  w << 0.0, 1.0, -1.0, 0.0;
  EXPECT_DOUBLE_EQ(sc::sdet_blocks(w, a, 2.0 * identity(2)), 0.25);
  EXPECT_DOUBLE_EQ(sc::sdet_blocks(w, a, identity(2)), 1.0);
  EXPECT_THROW(sc::sdet_blocks(w, a, Eigen::MatrixXd::Zero(2, 2)), sc::DegenerateMetric);
}

TEST(Measure, SuperdeterminantOfSplitForm) {
  const SuperForm like(2, 2);
  const Complex i(0.0, 1.0);
  const SuperForm omega = like.dx(0) * like.dx(1);
  SuperForm eta = like.like();
  for (int b = 0; b < 2; ++b) eta += (2.0 * i) * (like.dtheta(b) * like.dtheta(b));
  const auto split = sc::split_omega(omega + eta);
  EXPECT_LT(sc::max_abs_diff(sc::sdet(split, {0.3, -0.2}), Multivector::scalar(2, 0.25)), 1e-15);
  EXPECT_LT((sc::fiber_metric(omega + eta, {0.0, 0.0}) - 2.0 * identity(2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Measure, BerezinianVariantsAgreeWithOddMixing) {
  sc::Rng rng(51);
  const int m = 4;
  for (int k = 0; k < 30; ++k) {
    const int p = 2, q = 2;
    sc::MvMatrix w(p, p, m), a(p, q, m), c(q, p, m), n(q, q, m);
    const Eigen::MatrixXd w0 = sc::random_spd(rng, p), n0 = sc::random_spd(rng, q);
    for (int r = 0; r < p; ++r) {
      for (int s = 0; s < p; ++s) w(r, s) = Multivector::scalar(m, w0(r, s)) + 0.3 * sc::random_homogeneous(rng, m, 2);
    }
    for (int r = 0; r < q; ++r) {
      for (int s = 0; s < q; ++s) n(r, s) = Multivector::scalar(m, n0(r, s)) + 0.3 * sc::random_homogeneous(rng, m, 2);
    }
    for (int r = 0; r < p; ++r) {
      for (int s = 0; s < q; ++s) {
        a(r, s) = 0.5 * sc::random_homogeneous(rng, m, 1);
        c(s, r) = 0.5 * sc::random_homogeneous(rng, m, 1);
      }
    }
    const auto fiber = sc::berezinian_fiber(w, a, c, n), base = sc::berezinian_base(w, a, c, n);
    EXPECT_LT(sc::max_abs_diff(fiber, base), 1e-12 * (1.0 + fiber.max_abs()));
  }
}

TEST(Measure, ThetaVolume) {
  EXPECT_EQ(sc::theta_volume(identity(2)), Multivector::monomial(2, 3));
  Eigen::MatrixXd eta(2, 2);
  eta << 4.0, 0.0, 0.0, 1.0;
  EXPECT_EQ(sc::theta_volume(eta), 2.0 * Multivector::monomial(2, 3));
  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1.0, 0.0, 0.0, -1.0;
  EXPECT_THROW(sc::theta_volume(indefinite), sc::DomainError);
}

TEST(Measure, ThetaVolumeInOrthonormalFrame) {
  // Θ = √det η θ¹θ² becomes θ^1̄θ^2̄ after θ ↦ E⁻¹θ̄
  sc::Rng rng(52);
  const Eigen::MatrixXd eta = sc::random_spd(rng, 2);
  const auto lab = sc::make_laboratory(eta);
  EXPECT_LT(sc::max_abs_diff(sc::to_frame(sc::theta_volume(eta), lab.frame), Multivector::monomial(2, 3)), 1e-12);
}

TEST(Measure, SuperIntegralReducesToBaseIntegral) {
  const SuperForm like(2, 2);
  const Complex i(0.0, 1.0);
  const SuperForm omega =
      like.dx(0) * like.dx(1) + (4.0 * i) * (like.dtheta(0) * like.dtheta(0)) + i * (like.dtheta(1) * like.dtheta(1));
  const auto split = sc::split_omega(omega);
  const SuperForm f = like.x(0) * like.x(0) + like.x(1) + like.x(0) * like.theta(0) * like.theta(1) + like.theta(1);
  const sc::Box box{{0.0, 0.0}, {1.0, 1.0}, 65};
  const Complex super = sc::super_integral(split, f, box), reduced = sc::reduced_integral(split, f, box);
  EXPECT_LT(std::abs(super - reduced), 1e-12);
  EXPECT_NEAR(super.real(), 5.0 / 6.0, 1e-3);
}

TEST(Measure, Pfaffian) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(4, 4);
  a(0, 1) = 1.0;
  a(2, 3) = 3.0;
  a(0, 2) = 2.0;
  const Eigen::MatrixXcd s = a - a.transpose();
  EXPECT_NEAR(std::abs(sc::pfaffian(s) - Complex(3.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(sc::pfaffian(s) * sc::pfaffian(s) - s.determinant()), 0.0, 1e-12);
}
