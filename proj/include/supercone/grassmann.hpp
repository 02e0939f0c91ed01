#pragma once

// Exterior algebra Λℝᵐ (complexified) with dense bitmask storage.
//
// Generators are numbered 0..m-1 in code; bit a of a mask stands for the
// generator written θ^{a+1} in the usual 1-based notation. A mask denotes the
// ordered monomial θ^{a₁}θ^{a₂}⋯θ^{a_k} with a₁ < a₂ < ⋯ < a_k.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "supercone/errors.hpp"

namespace supercone {

using Complex = std::complex<double>;
using Mask = std::uint32_t;

inline constexpr int kMaxGenerators = 12;

inline int grade_of(Mask mask) { return std::popcount(mask); }

/// Sign of θ^A θ^B relative to θ^{A∪B} for disjoint A, B: the parity of the
/// number of pairs (i ∈ A, j ∈ B) with i > j.
inline int reorder_sign(Mask a, Mask b) {
  int swaps = 0;
  while (b != 0) {
    const int j = std::countr_zero(b);
    swaps += std::popcount(a >> (j + 1));
    b &= b - 1;
  }
  return (swaps & 1) ? -1 : 1;
}

/// (-1)^{⌊k/2⌋}: the grade sign of the dagger involution, equal to the sign of
/// reversing a grade-k monomial.
inline int reversion_sign(int k) { return ((k / 2) & 1) ? -1 : 1; }

class Multivector {
 public:
  Multivector() : Multivector(0) {}

  explicit Multivector(int m) : m_(m) {
    if (m < 0 || m > kMaxGenerators) {
      throw RangeError("generator count " + std::to_string(m) +
                       " outside [0, " + std::to_string(kMaxGenerators) + "]");
    }
    coeffs_.assign(std::size_t{1} << m, Complex{});
  }

  static Multivector scalar(int m, Complex c) {
    Multivector out(m);
    out.coeffs_[0] = c;
    return out;
  }

  static Multivector monomial(int m, Mask mask, Complex c = 1.0) {
    Multivector out(m);
    out.check_mask(mask);
    out.coeffs_[mask] = c;
    return out;
  }

  /// θ^{a+1}, i.e. the generator with zero-based index a.
  static Multivector generator(int m, int a) {
    if (a < 0 || a >= m) {
      throw RangeError("generator index " + std::to_string(a) +
                       " outside [0, " + std::to_string(m) + ")");
    }
    return monomial(m, Mask{1} << a);
  }

  int m() const { return m_; }
  std::size_t size() const { return coeffs_.size(); }
  Mask top_mask() const { return static_cast<Mask>(coeffs_.size() - 1); }

  Complex operator[](Mask mask) const { return coeffs_[mask]; }
  Complex& operator[](Mask mask) { return coeffs_[mask]; }

  Complex at(Mask mask) const {
    check_mask(mask);
    return coeffs_[mask];
  }

  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }

  bool is_zero() const {
    for (const auto& c : coeffs_) {
      if (c != Complex{}) return false;
    }
    return true;
  }

  /// Largest coefficient modulus.
  double max_abs() const {
    double out = 0.0;
    for (const auto& c : coeffs_) out = std::max(out, std::abs(c));
    return out;
  }

  /// Grassmann parity: 0 even, 1 odd, -1 mixed. Zero counts as even.
  int parity() const {
    bool even = false, odd = false;
    for (Mask s = 0; s < coeffs_.size(); ++s) {
      if (coeffs_[s] == Complex{}) continue;
      (grade_of(s) % 2 ? odd : even) = true;
    }
    if (even && odd) return -1;
    return odd ? 1 : 0;
  }

  Multivector& operator+=(const Multivector& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  Multivector& operator*=(Complex s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator-(Multivector a) { return a *= -1.0; }
  friend Multivector operator*(Multivector a, Complex s) { return a *= s; }
  friend Multivector operator*(Complex s, Multivector a) { return a *= s; }
  friend Multivector operator*(Multivector a, double s) { return a *= Complex{s}; }
  friend Multivector operator*(double s, Multivector a) { return a *= Complex{s}; }
  friend Multivector operator/(Multivector a, Complex s) { return a *= (1.0 / s); }
  friend Multivector operator/(Multivector a, double s) { return a *= Complex{1.0 / s}; }

  /// Exact coefficient-wise equality.
  friend bool operator==(const Multivector& a, const Multivector& b) {
    return a.m_ == b.m_ && a.coeffs_ == b.coeffs_;
  }

  void check_same(const Multivector& o) const {
    if (o.m_ != m_) {
      throw DimensionError("multivector generator counts differ: " +
                           std::to_string(m_) + " vs " + std::to_string(o.m_));
    }
  }

 private:
  void check_mask(Mask mask) const {
    if (mask >= coeffs_.size()) {
      throw RangeError("mask " + std::to_string(mask) + " invalid for m=" +
                       std::to_string(m_));
    }
  }

  int m_;
  std::vector<Complex> coeffs_;
};

/// Graded-commutative exterior product.
inline Multivector mul(const Multivector& a, const Multivector& b) {
  a.check_same(b);
  Multivector out(a.m());
  const Mask n = static_cast<Mask>(a.size());
  for (Mask s = 0; s < n; ++s) {
    const Complex ca = a[s];
    if (ca == Complex{}) continue;
    for (Mask t = 0; t < n; ++t) {
      if ((s & t) != 0) continue;
      const Complex cb = b[t];
      if (cb == Complex{}) continue;
      out[s | t] += static_cast<double>(reorder_sign(s, t)) * ca * cb;
    }
  }
  return out;
}

inline Multivector operator*(const Multivector& a, const Multivector& b) { return mul(a, b); }

/// F† = ⊕ (-1)^{⌊k/2⌋} F*_k.
inline Multivector dagger(const Multivector& f) {
  Multivector out(f.m());
  for (Mask s = 0; s < f.size(); ++s) {
    out[s] = static_cast<double>(reversion_sign(grade_of(s))) * std::conj(f[s]);
  }
  return out;
}

/// With tol = 0 the comparison is exact.
inline bool is_hermitean(const Multivector& f, double tol = 0.0) {
  for (Mask s = 0; s < f.size(); ++s) {
    const Complex d = static_cast<double>(reversion_sign(grade_of(s))) * std::conj(f[s]);
    if (tol == 0.0 ? d != f[s] : std::abs(d - f[s]) > tol) return false;
  }
  return true;
}

inline Complex body(const Multivector& f) { return f[0]; }

inline Multivector soul(const Multivector& f) {
  Multivector out = f;
  out[0] = 0.0;
  return out;
}

inline Multivector grade(const Multivector& f, int k) {
  if (k < 0 || k > f.m()) {
    throw RangeError("grade " + std::to_string(k) + " outside [0, " +
                     std::to_string(f.m()) + "]");
  }
  Multivector out(f.m());
  for (Mask s = 0; s < f.size(); ++s) {
    if (grade_of(s) == k) out[s] = f[s];
  }
  return out;
}

/// Left derivative ∂/∂θ^{a+1}.
inline Multivector left_derivative(const Multivector& f, int a) {
  if (a < 0 || a >= f.m()) throw RangeError("derivative index out of range");
  const Mask bit = Mask{1} << a;
  Multivector out(f.m());
  for (Mask s = 0; s < f.size(); ++s) {
    if (!(s & bit) || f[s] == Complex{}) continue;
    const int below = std::popcount(s & (bit - 1));
    out[s ^ bit] += (below & 1 ? -1.0 : 1.0) * f[s];
  }
  return out;
}

/// Right derivative F ←∂/∂θ^{a+1}.
inline Multivector right_derivative(const Multivector& f, int a) {
  if (a < 0 || a >= f.m()) throw RangeError("derivative index out of range");
  const Mask bit = Mask{1} << a;
  Multivector out(f.m());
  for (Mask s = 0; s < f.size(); ++s) {
    if (!(s & bit) || f[s] == Complex{}) continue;
    const int above = std::popcount(s & ~((bit << 1) - 1));
    out[s ^ bit] += (above & 1 ? -1.0 : 1.0) * f[s];
  }
  return out;
}

/// Berezin integral with measure ∂θᵐ⋯∂θ¹, so that berezin(θ¹⋯θᵐ) = 1.
inline Complex berezin(const Multivector& f) { return f[f.top_mask()]; }

/// Algebra homomorphism fixed by θ^a ↦ Σ_b sub(b, a) θ^b.
inline Multivector substitute(const Multivector& f, const Eigen::MatrixXcd& sub) {
  const int m = f.m();
  if (sub.rows() != m || sub.cols() != m) {
    throw DimensionError("substitution matrix must be m x m");
  }
  std::vector<Multivector> images;
  images.reserve(m);
  for (int a = 0; a < m; ++a) {
    Multivector img(m);
    for (int b = 0; b < m; ++b) img[Mask{1} << b] = sub(b, a);
    images.push_back(std::move(img));
  }
  Multivector out(m);
  for (Mask s = 0; s < f.size(); ++s) {
    if (f[s] == Complex{}) continue;
    Multivector term = Multivector::scalar(m, f[s]);
    for (Mask rest = s; rest != 0; rest &= rest - 1) {
      term = mul(term, images[std::countr_zero(rest)]);
    }
    out += term;
  }
  return out;
}

/// Inverse of an element with non-vanishing body: f₀⁻¹ Σ_k (-f₀⁻¹ F̂)^k.
inline Multivector inverse(const Multivector& f) {
  const Complex f0 = body(f);
  if (f0 == Complex{}) throw ContractViolation("multivector with zero body is not invertible");
  const Multivector nil = soul(f) / f0;
  Multivector term = Multivector::scalar(f.m(), 1.0);
  Multivector sum = term;
  for (int k = 1; k <= f.m(); ++k) {
    term = -mul(term, nil);
    if (term.is_zero()) break;
    sum += term;
  }
  return sum / f0;
}

/// Principal square root of an even element with positive real body.
inline Multivector sqrt_even(const Multivector& f) {
  const Complex f0 = body(f);
  if (f0 == Complex{}) throw ContractViolation("square root needs a non-zero body");
  const Multivector nil = soul(f) / f0;
  // binomial series (1 + x)^{1/2}
  Multivector term = Multivector::scalar(f.m(), 1.0);
  Multivector sum = term;
  double coeff = 1.0;
  for (int k = 1; k <= f.m(); ++k) {
    coeff *= (0.5 - (k - 1)) / k;
    term = mul(term, nil);
    if (term.is_zero()) break;
    sum += coeff * term;
  }
  return sum * std::sqrt(f0);
}

/// Views Λℝᵐ inside Λℝᵐ' (m' ≥ m) by keeping masks unchanged.
inline Multivector embed(const Multivector& f, int m_target) {
  if (m_target < f.m()) throw DimensionError("cannot embed into a smaller algebra");
  Multivector out(m_target);
  for (Mask s = 0; s < f.size(); ++s) out[s] = f[s];
  return out;
}

inline double max_abs_diff(const Multivector& a, const Multivector& b) {
  a.check_same(b);
  double out = 0.0;
  for (Mask s = 0; s < a.size(); ++s) out = std::max(out, std::abs(a[s] - b[s]));
  return out;
}

// JSON: {"m": int, "terms": [{"mask": int, "re": float, "im": float}, ...]},
// zero terms omitted.

inline nlohmann::json to_json(const Multivector& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (Mask s = 0; s < f.size(); ++s) {
    if (f[s] == Complex{}) continue;
    terms.push_back({{"mask", s}, {"re", f[s].real()}, {"im", f[s].imag()}});
  }
  return {{"m", f.m()}, {"terms", terms}};
}

inline Multivector multivector_from_json(const nlohmann::json& j) {
  try {
    Multivector out(j.at("m").get<int>());
    for (const auto& t : j.at("terms")) {
      const auto mask = t.at("mask").get<std::int64_t>();
      if (mask < 0 || static_cast<std::uint64_t>(mask) >= out.size()) {
        throw SchemaError("term mask out of range: " + std::to_string(mask));
      }
      out[static_cast<Mask>(mask)] +=
          Complex{t.value("re", 0.0), t.value("im", 0.0)};
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("multivector json: ") + e.what());
  } catch (const RangeError& e) {
    throw SchemaError(e.what());
  }
}

}  // namespace supercone
