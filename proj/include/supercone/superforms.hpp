#pragma once

// Polynomial superdifferential forms on ℝ^{n|m}.
//
// A term is c · x^α θ^S dx^I dθ^β, always stored in that order. Parity is the
// total one: θ and dx are odd, x and dθ are even. Coefficients are polynomial
// in x with bounded total degree, and the dθ-degree is truncated at `s`.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "supercone/errors.hpp"
#include "supercone/grassmann.hpp"
#include "supercone/supermatrix.hpp"

namespace supercone {

inline constexpr int kMaxBaseDim = 4;
inline constexpr int kMaxFiberDim = 6;
inline constexpr int kDefaultDthetaCap = 4;
inline constexpr int kDefaultDegreeCap = 6;

struct TermKey {
  std::array<std::uint8_t, kMaxBaseDim> xpow{};
  Mask theta = 0;
  Mask dx = 0;
  std::array<std::uint8_t, kMaxFiberDim> dtheta{};

  int x_degree() const {
    int d = 0;
    for (auto p : xpow) d += p;
    return d;
  }
  int theta_degree() const { return grade_of(theta); }
  int dx_degree() const { return grade_of(dx); }
  int dtheta_degree() const {
    int d = 0;
    for (auto p : dtheta) d += p;
    return d;
  }
  int form_degree() const { return dx_degree() + dtheta_degree(); }
  int parity() const { return (theta_degree() + dx_degree()) % 2; }

  friend auto operator<=>(const TermKey&, const TermKey&) = default;
};

class SuperForm {
 public:
  using Terms = std::map<TermKey, Complex>;

  SuperForm() : SuperForm(0, 0) {}

  SuperForm(int n, int m, int dtheta_cap = kDefaultDthetaCap, int degree_cap = kDefaultDegreeCap)
      : n_(n), m_(m), s_(dtheta_cap), degree_cap_(degree_cap) {
    if (n < 0 || n > kMaxBaseDim) throw RangeError("base dimension outside [0, 4]");
    if (m < 0 || m > kMaxFiberDim) throw RangeError("fiber dimension outside [0, 6]");
    if (dtheta_cap < 0 || degree_cap < 0) throw RangeError("negative truncation cap");
  }

  int n() const { return n_; }
  int m() const { return m_; }
  int dtheta_cap() const { return s_; }
  int degree_cap() const { return degree_cap_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  SuperForm like() const { return SuperForm(n_, m_, s_, degree_cap_); }

  /// Adds c·key, validating the key against the dimensions and caps.
  void add(const TermKey& key, Complex c) {
    if (c == Complex{}) return;
    validate(key);
    auto [it, fresh] = terms_.emplace(key, c);
    if (!fresh) {
      it->second += c;
      if (it->second == Complex{}) terms_.erase(it);
    }
  }

  Complex coeff(const TermKey& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? Complex{} : it->second;
  }

  double max_abs() const {
    double out = 0.0;
    for (const auto& [k, c] : terms_) out = std::max(out, std::abs(c));
    return out;
  }

  SuperForm& operator+=(const SuperForm& o) {
    check_same(o);
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  SuperForm& operator-=(const SuperForm& o) {
    check_same(o);
    for (const auto& [k, c] : o.terms_) add(k, -c);
    return *this;
  }
  SuperForm& operator*=(Complex s) {
    if (s == Complex{}) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }

  friend SuperForm operator+(SuperForm a, const SuperForm& b) { return a += b; }
  friend SuperForm operator-(SuperForm a, const SuperForm& b) { return a -= b; }
  friend SuperForm operator-(SuperForm a) { return a *= -1.0; }
  friend SuperForm operator*(Complex s, SuperForm a) { return a *= s; }
  friend SuperForm operator*(SuperForm a, Complex s) { return a *= s; }
  friend SuperForm operator*(double s, SuperForm a) { return a *= Complex{s}; }

  friend bool operator==(const SuperForm& a, const SuperForm& b) {
    return a.n_ == b.n_ && a.m_ == b.m_ && a.terms_ == b.terms_;
  }

  void check_same(const SuperForm& o) const {
    if (o.n_ != n_ || o.m_ != m_) throw DimensionError("superforms live on different R^{n|m}");
  }

  // Builders for single generators.
  static TermKey unit_key() { return TermKey{}; }

  SuperForm x(int i) const { return single([&](TermKey& k) { k.xpow.at(check_base(i))++; }); }
  SuperForm theta(int a) const {
    return single([&](TermKey& k) { k.theta = Mask{1} << check_fiber(a); });
  }
  SuperForm dx(int i) const { return single([&](TermKey& k) { k.dx = Mask{1} << check_base(i); }); }
  SuperForm dtheta(int a) const { return single([&](TermKey& k) { k.dtheta.at(check_fiber(a))++; }); }
  SuperForm constant(Complex c) const {
    SuperForm out = like();
    out.add(TermKey{}, c);
    return out;
  }

  /// Lifts a θ-only superfield to a 0-form with constant coefficients.
  SuperForm from_multivector(const Multivector& f) const {
    if (f.m() != m_) throw DimensionError("multivector generator count differs from the form");
    SuperForm out = like();
    for (Mask s = 0; s < f.size(); ++s) {
      TermKey k;
      k.theta = s;
      out.add(k, f[s]);
    }
    return out;
  }

 private:
  int check_base(int i) const {
    if (i < 0 || i >= n_) throw RangeError("base coordinate index out of range");
    return i;
  }
  int check_fiber(int a) const {
    if (a < 0 || a >= m_) throw RangeError("fiber coordinate index out of range");
    return a;
  }

  template <typename F>
  SuperForm single(F&& edit) const {
    SuperForm out = like();
    TermKey k;
    edit(k);
    out.add(k, 1.0);
    return out;
  }

  void validate(const TermKey& key) const {
    for (int i = n_; i < kMaxBaseDim; ++i) {
      if (key.xpow[i] != 0) throw RangeError("x power beyond base dimension");
    }
    for (int a = m_; a < kMaxFiberDim; ++a) {
      if (key.dtheta[a] != 0) throw RangeError("dtheta beyond fiber dimension");
    }
    if ((key.theta >> m_) != 0) throw RangeError("theta mask beyond fiber dimension");
    if ((key.dx >> n_) != 0) throw RangeError("dx mask beyond base dimension");
    if (key.dtheta_degree() > s_) {
      throw TruncationOverflow("dtheta degree " + std::to_string(key.dtheta_degree()) +
                               " exceeds cap " + std::to_string(s_));
    }
    if (key.x_degree() > degree_cap_) {
      throw TruncationOverflow("polynomial degree " + std::to_string(key.x_degree()) +
                               " exceeds cap " + std::to_string(degree_cap_));
    }
  }

  int n_, m_, s_, degree_cap_;
  Terms terms_;
};

inline SuperForm mul(const SuperForm& a, const SuperForm& b) {
  a.check_same(b);
  SuperForm out = a.like();
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      if ((ka.theta & kb.theta) != 0 || (ka.dx & kb.dx) != 0) continue;
      int sign = reorder_sign(ka.theta, kb.theta) * reorder_sign(ka.dx, kb.dx);
      if ((ka.dx_degree() * kb.theta_degree()) % 2) sign = -sign;
      TermKey k;
      for (int i = 0; i < kMaxBaseDim; ++i) k.xpow[i] = ka.xpow[i] + kb.xpow[i];
      for (int i = 0; i < kMaxFiberDim; ++i) k.dtheta[i] = ka.dtheta[i] + kb.dtheta[i];
      k.theta = ka.theta | kb.theta;
      k.dx = ka.dx | kb.dx;
      out.add(k, static_cast<double>(sign) * ca * cb);
    }
  }
  return out;
}

inline SuperForm operator*(const SuperForm& a, const SuperForm& b) { return mul(a, b); }

inline int bits_below(Mask mask, int i) { return std::popcount(mask & ((Mask{1} << i) - 1)); }
inline double parity_sign(int k) { return (k & 1) ? -1.0 : 1.0; }

/// d = dx^i ∂/∂x^i.
inline SuperForm d_horiz(const SuperForm& f) {
  SuperForm out = f.like();
  for (const auto& [k, c] : f.terms()) {
    for (int i = 0; i < f.n(); ++i) {
      if (k.xpow[i] == 0 || (k.dx >> i & 1)) continue;
      TermKey nk = k;
      nk.xpow[i]--;
      nk.dx |= Mask{1} << i;
      const double sign = parity_sign(k.theta_degree() + bits_below(k.dx, i));
      out.add(nk, sign * k.xpow[i] * c);
    }
  }
  return out;
}

/// d̂ = dθ^a ∂/∂θ^a.
inline SuperForm d_vert(const SuperForm& f) {
  SuperForm out = f.like();
  for (const auto& [k, c] : f.terms()) {
    for (int a = 0; a < f.m(); ++a) {
      if (!(k.theta >> a & 1)) continue;
      TermKey nk = k;
      nk.theta ^= Mask{1} << a;
      nk.dtheta[a]++;
      out.add(nk, parity_sign(bits_below(k.theta, a)) * c);
    }
  }
  return out;
}

/// d_T = d + d̂.
inline SuperForm d_total(const SuperForm& f) { return d_horiz(f) + d_vert(f); }

/// Odd contraction ι(∂/∂x^i), acting from the left.
inline SuperForm interior_dx(const SuperForm& f, int i) {
  if (i < 0 || i >= f.n()) throw RangeError("base index out of range");
  SuperForm out = f.like();
  for (const auto& [k, c] : f.terms()) {
    if (!(k.dx >> i & 1)) continue;
    TermKey nk = k;
    nk.dx ^= Mask{1} << i;
    out.add(nk, parity_sign(k.theta_degree() + bits_below(k.dx, i)) * c);
  }
  return out;
}

/// Even contraction ι(∂/∂θ^a), i.e. ∂/∂(dθ^a).
inline SuperForm interior_dtheta(const SuperForm& f, int a) {
  if (a < 0 || a >= f.m()) throw RangeError("fiber index out of range");
  SuperForm out = f.like();
  for (const auto& [k, c] : f.terms()) {
    if (k.dtheta[a] == 0) continue;
    TermKey nk = k;
    nk.dtheta[a]--;
    out.add(nk, static_cast<double>(k.dtheta[a]) * c);
  }
  return out;
}

/// Parts of f whose terms satisfy `keep`.
template <typename Pred>
SuperForm filter(const SuperForm& f, Pred keep) {
  SuperForm out = f.like();
  for (const auto& [k, c] : f.terms()) {
    if (keep(k)) out.add(k, c);
  }
  return out;
}

/// Largest coefficient of a − b.
inline double max_abs_diff(const SuperForm& a, const SuperForm& b) { return (a - b).max_abs(); }

/// Euler homotopy inverse of d̂: (θ^a ∂/∂dθ^a) / (θ-degree + dθ-degree), term by term.
/// Returns f with d̂f = g for d̂-closed g without dθ-free part.
inline SuperForm dhat_partial_inverse(const SuperForm& g, double tol = 1e-12) {
  const double scale = 1.0 + g.max_abs();
  if (d_vert(g).max_abs() > tol * scale) {
    throw ContractViolation("dhat_partial_inverse needs a d-hat-closed form");
  }
  SuperForm out = g.like();
  for (const auto& [k, c] : g.terms()) {
    const int dtheta_deg = k.dtheta_degree();
    if (dtheta_deg == 0) {
      if (std::abs(c) > tol * scale) {
        throw ContractViolation("dhat_partial_inverse: dtheta-free terms are not d-hat-exact");
      }
      continue;
    }
    const double weight = 1.0 / (k.theta_degree() + dtheta_deg);
    for (int a = 0; a < g.m(); ++a) {
      if (k.dtheta[a] == 0 || (k.theta >> a & 1)) continue;
      TermKey nk = k;
      nk.dtheta[a]--;
      nk.theta |= Mask{1} << a;
      out.add(nk, parity_sign(bits_below(k.theta, a)) * k.dtheta[a] * weight * c);
    }
  }
  return out;
}

struct QuartetResiduals {
  double d_omega = 0.0;        // dω
  double dhat_omega_d_a = 0.0; // d̂ω + dA
  double dhat_a_d_eta = 0.0;   // d̂A + dη
  double dhat_eta = 0.0;       // d̂η

  double max() const { return std::max({d_omega, dhat_omega_d_a, dhat_a_d_eta, dhat_eta}); }
};

struct OmegaSplit {
  SuperForm omega;
  SuperForm A;
  SuperForm eta;
  SuperForm omega0;
  QuartetResiduals residuals;

  SuperForm assemble() const { return omega + A + eta; }
};

inline OmegaSplit split_omega(const SuperForm& big_omega) {
  for (const auto& [k, c] : big_omega.terms()) {
    if (k.form_degree() != 2) throw ContractViolation("split_omega needs a two-form");
    if (k.parity() != 0) throw ContractViolation("split_omega needs an even form");
  }
  OmegaSplit out;
  out.omega = filter(big_omega, [](const TermKey& k) { return k.dx_degree() == 2; });
  out.A = filter(big_omega, [](const TermKey& k) { return k.dx_degree() == 1; });
  out.eta = filter(big_omega, [](const TermKey& k) { return k.dx_degree() == 0; });
  out.omega0 = filter(out.omega, [](const TermKey& k) { return k.theta == 0; });
  out.residuals.d_omega = d_horiz(out.omega).max_abs();
  out.residuals.dhat_omega_d_a = (d_vert(out.omega) + d_horiz(out.A)).max_abs();
  out.residuals.dhat_a_d_eta = (d_vert(out.A) + d_horiz(out.eta)).max_abs();
  out.residuals.dhat_eta = d_vert(out.eta).max_abs();
  return out;
}

// ---------------------------------------------------------------------------
// Pointwise evaluation

/// Substitutes x = point, leaving a form with constant coefficients.
inline SuperForm evaluate_at(const SuperForm& f, const std::vector<double>& point) {
  if (static_cast<int>(point.size()) != f.n()) throw DimensionError("point has wrong dimension");
  SuperForm out = f.like();
  for (const auto& [k, c] : f.terms()) {
    double w = 1.0;
    for (int i = 0; i < f.n(); ++i) w *= std::pow(point[i], k.xpow[i]);
    TermKey nk = k;
    nk.xpow.fill(0);
    out.add(nk, w * c);
  }
  return out;
}

/// θ-superfield multiplying x^0 dx^I dθ^β in f evaluated at `point`.
inline Multivector coefficient_at(const SuperForm& f, const std::vector<double>& point, Mask dx,
                                  const std::array<std::uint8_t, kMaxFiberDim>& dtheta) {
  const SuperForm at = evaluate_at(f, point);
  Multivector out(f.m());
  for (const auto& [k, c] : at.terms()) {
    if (k.dx == dx && k.dtheta == dtheta) out[k.theta] += c;
  }
  return out;
}

struct OmegaBlocks {
  MvMatrix W;  // ι_i ι_j: Ω ⊃ ½ W_ij dx^i dx^j
  MvMatrix A;  // dθ^b part of ι_i Ω
  MvMatrix B;  // dx^j part of ι_a Ω
  MvMatrix N;  // dθ^b part of ι_a Ω
};

/// Blocks of a two-form at a point, read off from single contractions:
/// ι_i Ω = W_ij dx^j + A_ib dθ^b and ι_a Ω = B_aj dx^j + N_ab dθ^b.
inline OmegaBlocks omega_blocks(const SuperForm& big_omega, const std::vector<double>& point) {
  const int n = big_omega.n(), m = big_omega.m();
  const SuperForm at = evaluate_at(big_omega, point);
  OmegaBlocks out{MvMatrix(n, n, m), MvMatrix(n, m, m), MvMatrix(m, n, m), MvMatrix(m, m, m)};
  auto read = [&](const SuperForm& one_form, int row, MvMatrix& dx_block, MvMatrix& dtheta_block) {
    for (const auto& [k, c] : one_form.terms()) {
      if (k.dx_degree() == 1 && k.dtheta_degree() == 0) {
        dx_block(row, std::countr_zero(k.dx))[k.theta] += c;
      } else if (k.dx_degree() == 0 && k.dtheta_degree() == 1) {
        const int b = static_cast<int>(std::find(k.dtheta.begin(), k.dtheta.end(), 1) - k.dtheta.begin());
        dtheta_block(row, b)[k.theta] += c;
      } else {
        throw ContractViolation("omega_blocks needs a two-form");
      }
    }
  };
  for (int i = 0; i < n; ++i) read(interior_dx(at, i), i, out.W, out.A);
  for (int a = 0; a < m; ++a) read(interior_dtheta(at, a), a, out.B, out.N);
  return out;
}

// ---------------------------------------------------------------------------
// Hodge-like decomposition

namespace detail {

/// Σ_ℓ (−K d)^ℓ y with K the Euler partial inverse of d̂.
inline SuperForm neumann_kd(const SuperForm& y) {
  SuperForm sum = y;
  SuperForm term = y;
  const int max_terms = y.n() + y.degree_cap() + 2;
  for (int l = 1; l <= max_terms; ++l) {
    const SuperForm dterm = d_horiz(term);
    if (dterm.is_zero()) return sum;
    term = -dhat_partial_inverse(dterm);
    sum += term;
  }
  if (!d_horiz(term).is_zero()) throw ContractViolation("(1 + K d)^-1 series did not terminate");
  return sum;
}

}  // namespace detail

struct HodgeParts {
  SuperForm omega0;
  SuperForm beta;
  SuperForm gamma;
};

/// Ω = ω₀ + Σ_ℓ (−d̂⁻¹ d)^ℓ d̂(β + γ).
inline SuperForm hodge_reconstruct(const HodgeParts& parts) {
  return parts.omega0 + detail::neumann_kd(d_vert(parts.beta + parts.gamma));
}

/// Fiber metric block at θ = 0 of a two-form, as a complex m×m matrix N
/// with Ω ⊃ ½ N_ab dθ^a dθ^b.
inline Eigen::MatrixXcd fiber_block_body(const SuperForm& big_omega, const std::vector<double>& point) {
  return omega_blocks(big_omega, point).N.body();
}

inline HodgeParts hodge_decompose(const SuperForm& big_omega, double tol = 1e-12) {
  const OmegaSplit split = split_omega(big_omega);
  const double scale = 1.0 + big_omega.max_abs();
  if (d_total(big_omega).max_abs() > tol * scale) {
    throw NotClosed("hodge_decompose needs a d_T-closed two-form");
  }
  HodgeParts out{split.omega0, big_omega.like(), big_omega.like()};
  if (big_omega.m() == 0) return out;

  const Eigen::MatrixXcd n0 = fiber_block_body(big_omega, std::vector<double>(big_omega.n(), 0.0));
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(n0);
  if (!lu.isInvertible()) throw DegenerateMetric("fiber metric is singular at the origin");

  out.gamma = dhat_partial_inverse(split.eta, tol);
  SuperForm closed_part = split.A;
  const SuperForm d_eta = d_horiz(split.eta);
  if (!d_eta.is_zero()) closed_part += dhat_partial_inverse(d_eta, tol);
  out.beta = dhat_partial_inverse(closed_part, tol);
  return out;
}

// ---------------------------------------------------------------------------
// Kernel vector

/// Even super vector field at a point: base components v^i ∂/∂x^i and
/// fiber components w^a ∂/∂θ^a, each a θ-superfield.
struct SuperVector {
  std::vector<Multivector> base;
  std::vector<Multivector> fiber;
};

/// ι_P Ω at the point, computed by contracting the form itself.
inline SuperForm contract(const SuperVector& p, const SuperForm& big_omega,
                          const std::vector<double>& point) {
  const SuperForm at = evaluate_at(big_omega, point);
  SuperForm out = at.like();
  for (int i = 0; i < at.n(); ++i) out += at.from_multivector(p.base.at(i)) * interior_dx(at, i);
  for (int a = 0; a < at.m(); ++a) {
    out += at.from_multivector(p.fiber.at(a)) * interior_dtheta(at, a);
  }
  return out;
}

struct KernelLift {
  SuperVector P;
  double residual = 0.0;
};

/// Kernel vector P of Ω at `point` with base part seeded by ρ₀ ∈ ker ω₀.
/// Fiber part w = −v A N⁻¹, base part v = ρ₀ Σ_k (−Ŵ W₀⁺)^k with
/// W̄ = W − A N⁻¹ B = W₀ + Ŵ and W₀⁺ the Moore–Penrose pseudo-inverse.
inline KernelLift kernel_lift(const OmegaSplit& split, const Eigen::VectorXd& rho0,
                              const std::vector<double>& point, double tol = 1e-12) {
  const SuperForm big_omega = split.assemble();
  const int n = big_omega.n(), m = big_omega.m();
  if (rho0.size() != n) throw DimensionError("rho0 has wrong dimension");
  const OmegaBlocks blocks = omega_blocks(big_omega, point);

  MvMatrix n_inv = MvMatrix::identity(0, m);
  MvMatrix w_bar = blocks.W;
  if (m > 0) {
    const Eigen::MatrixXcd n0 = blocks.N.body();
    if (Eigen::FullPivLU<Eigen::MatrixXcd>(n0).rank() < m) {
      throw DegenerateMetric("fiber block is singular at the point");
    }
    n_inv = inverse(blocks.N);
    w_bar = blocks.W - blocks.A * n_inv * blocks.B;
  }

  const Eigen::MatrixXcd w0 = w_bar.body();
  const Eigen::VectorXcd rho0c = rho0.cast<Complex>();
  if ((rho0c.transpose() * w0).cwiseAbs().maxCoeff() > tol * (1.0 + w0.cwiseAbs().maxCoeff()) * (1.0 + rho0.norm())) {
    throw ContractViolation("rho0 is not in the kernel of omega0");
  }

  MvMatrix w_hat = w_bar - MvMatrix::from_body(w0, m);
  const Eigen::MatrixXcd w0_pinv = w0.completeOrthogonalDecomposition().pseudoInverse();
  const MvMatrix step = -(w_hat * MvMatrix::from_body(w0_pinv, m));

  MvMatrix term = MvMatrix::from_body(rho0c.transpose(), m);
  MvMatrix v = term;
  for (int k = 1; k <= m; ++k) {
    term = term * step;
    if (term.max_abs() == 0.0) break;
    v = v + term;
  }

  KernelLift out;
  for (int i = 0; i < n; ++i) out.P.base.push_back(v(0, i));
  if (m > 0) {
    const MvMatrix w = -(v * blocks.A * n_inv);
    for (int a = 0; a < m; ++a) out.P.fiber.push_back(w(0, a));
  }
  out.residual = contract(out.P, big_omega, point).max_abs();
  return out;
}

// ---------------------------------------------------------------------------
// JSON: {"n", "m", "dtheta_cap", "degree_cap",
//        "terms": [{"x": [..n], "theta": mask, "dx": mask, "dtheta": [..m], "re", "im"}]}

inline nlohmann::json to_json(const SuperForm& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [k, c] : f.terms()) {
    std::vector<int> xs(k.xpow.begin(), k.xpow.begin() + f.n());
    std::vector<int> dts(k.dtheta.begin(), k.dtheta.begin() + f.m());
    terms.push_back({{"x", xs}, {"theta", k.theta}, {"dx", k.dx}, {"dtheta", dts},
                     {"re", c.real()}, {"im", c.imag()}});
  }
  return {{"n", f.n()},
          {"m", f.m()},
          {"dtheta_cap", f.dtheta_cap()},
          {"degree_cap", f.degree_cap()},
          {"terms", terms}};
}

inline SuperForm superform_from_json(const nlohmann::json& j) {
  try {
    SuperForm out(j.at("n").get<int>(), j.at("m").get<int>(),
                  j.value("dtheta_cap", kDefaultDthetaCap), j.value("degree_cap", kDefaultDegreeCap));
    for (const auto& t : j.at("terms")) {
      TermKey k;
      const auto xs = t.value("x", std::vector<int>(out.n(), 0));
      const auto dts = t.value("dtheta", std::vector<int>(out.m(), 0));
      if (static_cast<int>(xs.size()) != out.n() || static_cast<int>(dts.size()) != out.m()) {
        throw SchemaError("term multi-index lengths must match n and m");
      }
      for (int i = 0; i < out.n(); ++i) {
        if (xs[i] < 0 || xs[i] > 255) throw SchemaError("x power out of range");
        k.xpow[i] = static_cast<std::uint8_t>(xs[i]);
      }
      for (int a = 0; a < out.m(); ++a) {
        if (dts[a] < 0 || dts[a] > 255) throw SchemaError("dtheta power out of range");
        k.dtheta[a] = static_cast<std::uint8_t>(dts[a]);
      }
      k.theta = t.value("theta", Mask{0});
      k.dx = t.value("dx", Mask{0});
      out.add(k, Complex{t.value("re", 0.0), t.value("im", 0.0)});
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("superform json: ") + e.what());
  } catch (const RangeError& e) {
    throw SchemaError(e.what());
  }
}

}  // namespace supercone
