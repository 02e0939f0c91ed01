#pragma once

// Two-bit super phase-spacetime ℝ^{1|2}: state functions
// Φ = φ + φ_a θ^a − (i/2) φ̄ ε_ab θ^a θ^b evolving under the kernel vector
// P = ∂_t + θ^a M^b_a ∂_b of Ω = d_T(i η_ab θ^a dθ^b + (i/2) H ε_ab θ^a θ^b dt).

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "json.hpp"
#include "supercone/errors.hpp"
#include "supercone/grassmann.hpp"

namespace supercone {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

inline Mat2 levi_civita() {
  Mat2 e;
  e << 0.0, 1.0, -1.0, 0.0;
  return e;
}

struct EtaPath {
  enum class Kind { Constant, ExpScale, Poly, Custom };
  Kind kind = Kind::Constant;
  Mat2 base = Mat2::Identity();        // constant value, or exp_scale prefactor
  double rate = 0.0;                   // exp_scale: η = e^{rate t} base
  std::vector<Mat2> coeffs;            // poly: η = Σ coeffs[k] t^k
  std::function<Mat2(double)> custom;  // custom: derivative by central differences
  double fd_step = 1e-3;

  Mat2 value(double t) const {
    switch (kind) {
      case Kind::Constant: return base;
      case Kind::ExpScale: return std::exp(rate * t) * base;
      case Kind::Poly: {
        Mat2 out = Mat2::Zero();
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) out = out * t + *it;
        return out;
      }
      case Kind::Custom: return custom(t);
    }
    return base;
  }

  Mat2 derivative(double t) const {
    switch (kind) {
      case Kind::Constant: return Mat2::Zero();
      case Kind::ExpScale: return rate * std::exp(rate * t) * base;
      case Kind::Poly: {
        Mat2 out = Mat2::Zero();
        for (std::size_t k = coeffs.size(); k-- > 1;) out = out * t + static_cast<double>(k) * coeffs[k];
        return out;
      }
      case Kind::Custom: {
        const double h = fd_step;
        return (custom(t - 2 * h) - 8.0 * custom(t - h) + 8.0 * custom(t + h) - custom(t + 2 * h)) /
               (12.0 * h);
      }
    }
    return Mat2::Zero();
  }

  bool is_constant() const { return kind == Kind::Constant || (kind == Kind::ExpScale && rate == 0.0); }

  static EtaPath constant(const Mat2& eta) {
    EtaPath p;
    p.base = eta;
    return p;
  }
  static EtaPath exp_scale(const Mat2& base, double rate) {
    EtaPath p;
    p.kind = Kind::ExpScale;
    p.base = base;
    p.rate = rate;
    return p;
  }
  static EtaPath poly(std::vector<Mat2> coeffs) {
    EtaPath p;
    p.kind = Kind::Poly;
    p.coeffs = std::move(coeffs);
    return p;
  }
  static EtaPath from_function(std::function<Mat2(double)> f, double fd_step = 1e-3) {
    EtaPath p;
    p.kind = Kind::Custom;
    p.custom = std::move(f);
    p.fd_step = fd_step;
    return p;
  }
};

/// H(t) = Σ coeffs[k] t^k.
struct HPath {
  std::vector<double> coeffs{0.0};

  double value(double t) const {
    double out = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) out = out * t + *it;
    return out;
  }
  double derivative(double t) const {
    double out = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 1;) out = out * t + static_cast<double>(k) * coeffs[k];
    return out;
  }
  bool is_constant() const {
    for (std::size_t k = 1; k < coeffs.size(); ++k) {
      if (coeffs[k] != 0.0) return false;
    }
    return true;
  }
  static HPath constant(double h) { return HPath{{h}}; }
};

struct TwoBitSystem {
  EtaPath eta;
  HPath H;
  double t0 = 0.0;
  double t1 = 1.0;
  double step = 0.0;  ///< 0 selects 1e-3·min(1, 1/max|H|)

  void check_time(double t) const {
    const double slack = 1e-12 * (1.0 + std::abs(t0) + std::abs(t1));
    if (!(t >= t0 - slack && t <= t1 + slack)) {
      throw DomainError("time " + std::to_string(t) + " outside [" + std::to_string(t0) + ", " +
                        std::to_string(t1) + "]");
    }
  }

  /// Largest |H| on a uniform sample of the domain.
  double max_abs_h() const {
    double out = 0.0;
    for (int k = 0; k <= 100; ++k) out = std::max(out, std::abs(H.value(t0 + (t1 - t0) * k / 100.0)));
    return out;
  }

  double effective_step() const {
    if (step > 0.0) return step;
    const double hmax = max_abs_h();
    return 1e-3 * std::min(1.0, hmax > 0.0 ? 1.0 / hmax : 1.0);
  }

  bool is_constant() const { return eta.is_constant() && H.is_constant(); }

  /// Throws unless η(t) is symmetric positive definite on a sample of the domain.
  void validate(int samples = 101) const {
    if (!(t1 >= t0)) throw DomainError("system needs t0 <= t1");
    for (int k = 0; k < samples; ++k) {
      const double t = samples == 1 ? t0 : t0 + (t1 - t0) * k / (samples - 1);
      const Mat2 e = eta.value(t);
      if (std::abs(e(0, 1) - e(1, 0)) > 1e-12 * (1.0 + e.cwiseAbs().maxCoeff())) {
        throw ContractViolation("eta is not symmetric at t=" + std::to_string(t));
      }
      if (e.llt().info() != Eigen::Success || !(e.determinant() > 0.0) || !(e(0, 0) > 0.0)) {
        throw DegenerateMetric("eta is not positive definite at t=" + std::to_string(t));
      }
    }
  }
};

/// M^b_a = −½ η^{bc}(H ε_ac + η'_ca), stored with row b and column a.
inline Mat2 generator_M(const TwoBitSystem& sys, double t) {
  sys.check_time(t);
  const Mat2 eta = sys.eta.value(t);
  return -0.5 * eta.inverse() * (sys.eta.derivative(t) - sys.H.value(t) * levi_civita());
}

namespace detail {

inline Mat2 generator_M_unchecked(const TwoBitSystem& sys, double t) {
  const Mat2 eta = sys.eta.value(t);
  return -0.5 * eta.inverse() * (sys.eta.derivative(t) - sys.H.value(t) * levi_civita());
}

inline int step_count(const TwoBitSystem& sys, double from, double to) {
  const double span = std::abs(to - from);
  if (span == 0.0) return 0;
  return std::max(1, static_cast<int>(std::ceil(span / sys.effective_step() - 1e-9)));
}

}  // namespace detail

/// V with φ(to) = V φ(from) for φ' = −Mᵀ φ, as a product of fourth-order
/// Magnus steps (two Gauss points per step).
inline Mat2 propagator(const TwoBitSystem& sys, double from, double to) {
  sys.check_time(from);
  sys.check_time(to);
  const int steps = detail::step_count(sys, from, to);
  Mat2 v = Mat2::Identity();
  if (steps == 0) return v;
  const double h = (to - from) / steps;
  const double c1 = 0.5 - std::sqrt(3.0) / 6.0, c2 = 0.5 + std::sqrt(3.0) / 6.0;
  for (int k = 0; k < steps; ++k) {
    const double t = from + k * h;
    const Mat2 a1 = -detail::generator_M_unchecked(sys, t + c1 * h).transpose();
    const Mat2 a2 = -detail::generator_M_unchecked(sys, t + c2 * h).transpose();
    const Mat2 omega = 0.5 * h * (a1 + a2) + (std::sqrt(3.0) / 12.0) * h * h * (a2 * a1 - a1 * a2);
    v = Mat2(omega.exp()) * v;
  }
  return v;
}

/// The paper's U with φ_a(t) = U^b_a φ_b(T): the transpose of the column propagator.
inline Mat2 propagator_U(const TwoBitSystem& sys, double T, double t) {
  return propagator(sys, T, t).transpose();
}

/// u = exp(−∫_from^to tr M), by two-point Gauss quadrature per step.
inline double scalar_propagator(const TwoBitSystem& sys, double from, double to) {
  sys.check_time(from);
  sys.check_time(to);
  const int steps = detail::step_count(sys, from, to);
  if (steps == 0) return 1.0;
  const double h = (to - from) / steps;
  const double c1 = 0.5 - std::sqrt(3.0) / 6.0, c2 = 0.5 + std::sqrt(3.0) / 6.0;
  double integral = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double t = from + k * h;
    integral += 0.5 * h *
                (detail::generator_M_unchecked(sys, t + c1 * h).trace() +
                 detail::generator_M_unchecked(sys, t + c2 * h).trace());
  }
  return std::exp(-integral);
}

/// cos β Id + √det η sin β η⁻¹ε with β = (t−T)H / (2√det η). As a paper-index
/// matrix this is U(T, t): it carries φ(t) back to φ(T).
inline Mat2 closed_form_U(double H, const Mat2& eta, double T, double t) {
  const double sd = std::sqrt(eta.determinant());
  const double beta = (t - T) * H / (2.0 * sd);
  return std::cos(beta) * Mat2::Identity() + sd * std::sin(beta) * eta.inverse() * levi_civita();
}

/// Raw coefficients (φ, φ_a, φ̄) in the coordinates θ^a.
struct StateFunction {
  double phi = 0.0;
  Vec2 phi_a = Vec2::Zero();
  double phibar = 0.0;

  Multivector to_multivector() const {
    Multivector out(2);
    out[0] = phi;
    out[1] = phi_a(0);
    out[2] = phi_a(1);
    out[3] = Complex(0.0, -phibar);
    return out;
  }

  static StateFunction from_multivector(const Multivector& f) {
    if (f.m() != 2) throw DimensionError("two-bit state functions need m = 2");
    if (!is_hermitean(f, 1e-12 * (1.0 + f.max_abs()))) {
      throw ContractViolation("state function must be hermitean");
    }
    return StateFunction{f[0].real(), Vec2(f[1].real(), f[2].real()), -f[3].imag()};
  }

  double max_abs() const {
    return std::max({std::abs(phi), phi_a.cwiseAbs().maxCoeff(), std::abs(phibar)});
  }
};

/// (Φ, Φ) = φ² + φ_a η^{ab} φ_b + φ̄² / det η.
inline double state_norm(const StateFunction& s, const Mat2& eta) {
  return s.phi * s.phi + s.phi_a.dot(eta.inverse() * s.phi_a) + s.phibar * s.phibar / eta.determinant();
}

/// Components in the orthonormal frame θ̄ = Eθ, η = EᵀE (upper Cholesky).
inline StateFunction to_orthonormal(const StateFunction& s, const Mat2& eta) {
  const Mat2 e = eta.llt().matrixU();
  return StateFunction{s.phi, e.transpose().inverse() * s.phi_a, s.phibar / e.determinant()};
}

inline StateFunction from_orthonormal(const StateFunction& s, const Mat2& eta) {
  const Mat2 e = eta.llt().matrixU();
  return StateFunction{s.phi, e.transpose() * s.phi_a, s.phibar * e.determinant()};
}

inline StateFunction normalized(const StateFunction& s, const Mat2& eta) {
  const double n = state_norm(s, eta);
  if (!(n > 0.0)) throw ZeroNorm("state function has zero norm");
  const double r = 1.0 / std::sqrt(n);
  return StateFunction{s.phi * r, s.phi_a * r, s.phibar * r};
}

/// Solution of φ' = 0, φ_a' + M^b_a φ_b = 0, φ̄' + M^a_a φ̄ = 0 from T to t.
inline StateFunction evolve(const TwoBitSystem& sys, const StateFunction& at_T, double T, double t) {
  return StateFunction{at_T.phi, propagator(sys, T, t) * at_T.phi_a,
                       scalar_propagator(sys, T, t) * at_T.phibar};
}

struct TrajectoryPoint {
  double t = 0.0;
  StateFunction state;
};

/// States on a uniform grid from T to t (inclusive), stepping the propagators
/// between consecutive grid points.
inline std::vector<TrajectoryPoint> trajectory(const TwoBitSystem& sys, const StateFunction& at_T,
                                               double T, double t, int intervals) {
  if (intervals < 0) throw RangeError("negative interval count");
  std::vector<TrajectoryPoint> out{{T, at_T}};
  if (intervals == 0 || t == T) return out;
  StateFunction s = at_T;
  for (int k = 1; k <= intervals; ++k) {
    const double prev = T + (t - T) * (k - 1) / intervals;
    const double cur = k == intervals ? t : T + (t - T) * k / intervals;
    s = evolve(sys, s, prev, cur);
    out.push_back({cur, s});
  }
  return out;
}

/// Hermitean observable X = x + x_a θ^a − (i/2) χ ε_ab θ^a θ^b with components
/// polynomial in t (coefficients in ascending powers).
struct Observable {
  std::vector<double> x{0.0};
  std::vector<double> x1{0.0};
  std::vector<double> x2{0.0};
  std::vector<double> chi{0.0};

  struct Values {
    double x = 0.0;
    Vec2 xa = Vec2::Zero();
    double chi = 0.0;
  };

  static double eval(const std::vector<double>& c, double t) {
    double out = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) out = out * t + *it;
    return out;
  }
  static double deriv(const std::vector<double>& c, double t) {
    double out = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) out = out * t + static_cast<double>(k) * c[k];
    return out;
  }

  Values at(double t) const { return {eval(x, t), Vec2(eval(x1, t), eval(x2, t)), eval(chi, t)}; }
  Values rate(double t) const { return {deriv(x, t), Vec2(deriv(x1, t), deriv(x2, t)), deriv(chi, t)}; }

  static Observable constant(const Multivector& f) {
    const StateFunction s = StateFunction::from_multivector(f);
    return Observable{{s.phi}, {s.phi_a(0)}, {s.phi_a(1)}, {s.phibar}};
  }
};

/// ⟨X⟩ = x + 2φ(φ_a η^{ab} x_b + φ̄χ/det η) / (Φ, Φ).
inline double expectation_values(const Observable::Values& x, const StateFunction& s, const Mat2& eta) {
  const double n = state_norm(s, eta);
  if (!(n > 0.0)) throw ZeroNorm("expectation needs a state function with non-zero norm");
  return x.x + 2.0 * s.phi * (s.phi_a.dot(eta.inverse() * x.xa) + s.phibar * x.chi / eta.determinant()) / n;
}

inline double expectation_at(const TwoBitSystem& sys, const Observable& x, const StateFunction& s, double t) {
  sys.check_time(t);
  return expectation_values(x.at(t), s, sys.eta.value(t));
}

/// Components of L_P X: (x', x'_a + M^b_a x_b, χ' + M^a_a χ).
inline Observable::Values liouville_action(const TwoBitSystem& sys, const Observable& x, double t) {
  const Mat2 m = generator_M(sys, t);
  const auto v = x.at(t);
  const auto r = x.rate(t);
  return {r.x, r.xa + m.transpose() * v.xa, r.chi + m.trace() * v.chi};
}

struct RateCheck {
  double lhs = 0.0;  ///< centered difference of ⟨X⟩
  double rhs = 0.0;  ///< ⟨L_P X⟩
  bool ok = false;
};

/// d⟨X⟩/dt against ⟨L_P X⟩ at t for the state s(t) on the trajectory.
inline RateCheck expectation_rate_check(const TwoBitSystem& sys, const Observable& x, const StateFunction& s,
                                        double t, double h = 1e-4) {
  sys.check_time(t);
  const double lo = std::max(sys.t0, t - h), hi = std::min(sys.t1, t + h);
  if (!(hi > lo)) throw DomainError("rate check needs a non-degenerate time window");
  const double e_hi = expectation_at(sys, x, evolve(sys, s, t, hi), hi);
  const double e_lo = expectation_at(sys, x, evolve(sys, s, t, lo), lo);
  RateCheck out;
  out.lhs = (e_hi - e_lo) / (hi - lo);
  out.rhs = expectation_values(liouville_action(sys, x, t), s, sys.eta.value(t));
  out.ok = std::abs(out.lhs - out.rhs) < 1e-6 * (1.0 + std::abs(out.rhs));
  return out;
}

/// Largest residual of the equations of motion along a trajectory, by central
/// differences at interior points, relative to the largest state component.
inline double liouville_residual(const TwoBitSystem& sys, const std::vector<TrajectoryPoint>& traj) {
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
    const auto& a = traj[k - 1];
    const auto& b = traj[k];
    const auto& c = traj[k + 1];
    const double dt = c.t - a.t;
    const Mat2 m = generator_M(sys, b.t);
    const double r_phi = std::abs((c.state.phi - a.state.phi) / dt);
    const Vec2 r_a = (c.state.phi_a - a.state.phi_a) / dt + m.transpose() * b.state.phi_a;
    const double r_bar = (c.state.phibar - a.state.phibar) / dt + m.trace() * b.state.phibar;
    const double scale = std::max(b.state.max_abs(), 1e-300);
    worst = std::max({worst, r_phi / scale, r_a.cwiseAbs().maxCoeff() / scale, std::abs(r_bar) / scale});
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Probabilities

struct ProbabilityVector {
  std::array<double, 4> p{};
  double delta_ellipsoid = 0.0;
  double delta_cone = 0.0;
};

inline double delta_ellipsoid(double p1, double p2, double p3) {
  const double s = p1 + p2 + p3;
  return 6.0 * (s * s - (s + p1 * p2 + p2 * p3 + p1 * p3) + 1.0 / 3.0);
}

inline double delta_cone(double p1, double p2, double p3) {
  return p1 * p1 + p2 * p2 + p3 * p3 - 2.0 * (p1 * p2 + p1 * p3 + p2 * p3);
}

inline ProbabilityVector make_probability_vector(const std::array<double, 4>& p) {
  return ProbabilityVector{p, delta_ellipsoid(p[0], p[1], p[2]), delta_cone(p[0], p[1], p[2])};
}

/// Indicator expectations of a state normalized in an orthonormal frame.
inline ProbabilityVector probabilities(const StateFunction& s, double tol = 1e-10) {
  const double n = s.phi * s.phi + s.phi_a.squaredNorm() + s.phibar * s.phibar;
  if (std::abs(n - 1.0) > tol) throw Unnormalized("probabilities need (Phi, Phi) = 1, got " + std::to_string(n));
  const double r2 = std::sqrt(2.0), r6 = std::sqrt(6.0), r8 = std::sqrt(8.0);
  const double f = s.phi, f1 = s.phi_a(0), f2 = s.phi_a(1), fb = s.phibar;
  return make_probability_vector({0.25 + f * (r8 * f1 - fb) / 6.0,
                                  0.25 + f * (-r2 * f1 + r6 * f2 - fb) / 6.0,
                                  0.25 + f * (-r2 * f1 - r6 * f2 - fb) / 6.0,
                                  0.25 + f * fb / 2.0});
}

/// Probabilities of a raw state measured in the laboratory at time t.
inline ProbabilityVector measure_probabilities(const TwoBitSystem& sys, const StateFunction& raw, double t) {
  sys.check_time(t);
  const Mat2 eta = sys.eta.value(t);
  return probabilities(to_orthonormal(normalized(raw, eta), eta));
}

/// Normalized orthonormal-frame state with the given probabilities, on the
/// root φ = √(1 + 2√(−Δ_ellipsoid)) / √2.
inline StateFunction state_from_probabilities(const std::array<double, 4>& p, double tol = 1e-12) {
  const double sum = p[0] + p[1] + p[2] + p[3];
  if (std::abs(sum - 1.0) > tol) throw Unnormalized("probabilities must sum to 1");
  const double d = delta_ellipsoid(p[0], p[1], p[2]);
  if (d > tol) throw OutsideCone("probability vector lies outside the ellipsoid (delta = " + std::to_string(d) + ")");
  const double phi = std::sqrt(1.0 + 2.0 * std::sqrt(std::max(0.0, -d))) / std::sqrt(2.0);
  StateFunction s;
  s.phi = phi;
  s.phi_a(0) = (2.0 * p[0] - p[1] - p[2]) / (std::sqrt(2.0) * phi);
  s.phi_a(1) = std::sqrt(3.0) * (p[1] - p[2]) / (std::sqrt(2.0) * phi);
  s.phibar = (3.0 - 4.0 * (p[0] + p[1] + p[2])) / (2.0 * phi);
  return s;
}

/// 4×4 map p(t) = T p(T) for constant H and η = δ.
inline Eigen::Matrix4d transition_matrix(double H, double T, double t) {
  const double c = std::cos((t - T) * H / 2.0), s = std::sin((t - T) * H / 2.0);
  const double r3 = std::sqrt(3.0);
  const double d = (1.0 + 2.0 * c) / 3.0, plus = (1.0 - c + r3 * s) / 3.0, minus = (1.0 - c - r3 * s) / 3.0;
  Eigen::Matrix4d out;
  out << d, plus, minus, 0.0,
         minus, d, plus, 0.0,
         plus, minus, d, 0.0,
         0.0, 0.0, 0.0, 1.0;
  return out;
}

inline Eigen::Matrix4d transition_matrix(const TwoBitSystem& sys, double T, double t) {
  if (!sys.is_constant() || !sys.eta.value(sys.t0).isApprox(Mat2::Identity(), 1e-14)) {
    throw ContractViolation("transition_matrix needs constant H and eta = identity");
  }
  sys.check_time(T);
  sys.check_time(t);
  return transition_matrix(sys.H.value(T), T, t);
}

// ---------------------------------------------------------------------------
// JSON system spec

namespace detail {

inline Mat2 mat2_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 || !j[1].is_array() ||
      j[1].size() != 2) {
    throw SchemaError("expected a 2x2 matrix");
  }
  Mat2 m;
  m << j[0][0].get<double>(), j[0][1].get<double>(), j[1][0].get<double>(), j[1][1].get<double>();
  return m;
}

}  // namespace detail

/// {"eta": {"kind": "constant", "value": [[..],[..]]}
///        | {"kind": "exp_scale", "base": [[..],[..]], "rate": r}
///        | {"kind": "poly", "coeffs": [[[..],[..]], ...]},
///  "H": number | {"kind": "constant", "value": h} | {"kind": "poly", "coeffs": [...]},
///  "t0": float, "t1": float, "step": float (optional)}
inline TwoBitSystem system_from_json(const nlohmann::json& j) {
  try {
    TwoBitSystem sys;
    const auto& e = j.at("eta");
    const std::string kind = e.at("kind").get<std::string>();
    if (kind == "constant") {
      sys.eta = EtaPath::constant(detail::mat2_from_json(e.at("value")));
    } else if (kind == "exp_scale") {
      sys.eta = EtaPath::exp_scale(detail::mat2_from_json(e.at("base")), e.at("rate").get<double>());
    } else if (kind == "poly") {
      std::vector<Mat2> coeffs;
      for (const auto& c : e.at("coeffs")) coeffs.push_back(detail::mat2_from_json(c));
      if (coeffs.empty()) throw SchemaError("poly eta needs at least one coefficient");
      sys.eta = EtaPath::poly(std::move(coeffs));
    } else {
      throw SchemaError("unknown eta kind '" + kind + "'");
    }
    const auto& h = j.at("H");
    if (h.is_number()) {
      sys.H = HPath::constant(h.get<double>());
    } else {
      const std::string hk = h.at("kind").get<std::string>();
      if (hk == "constant") {
        sys.H = HPath::constant(h.at("value").get<double>());
      } else if (hk == "poly") {
        sys.H = HPath{h.at("coeffs").get<std::vector<double>>()};
        if (sys.H.coeffs.empty()) throw SchemaError("poly H needs at least one coefficient");
      } else {
        throw SchemaError("unknown H kind '" + hk + "'");
      }
    }
    sys.t0 = j.at("t0").get<double>();
    sys.t1 = j.at("t1").get<double>();
    sys.step = j.value("step", 0.0);
    if (sys.step < 0.0) throw SchemaError("step must be non-negative");
    sys.validate();
    return sys;
  } catch (const nlohmann::json::exception& ex) {
    throw SchemaError(std::string("system json: ") + ex.what());
  }
}

}  // namespace supercone
