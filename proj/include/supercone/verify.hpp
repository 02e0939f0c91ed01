#pragma once

// Invariant suites run by `supercone verify`. Each suite owns its RNG,
// seeded from the run seed and the suite name, so suites can run in parallel
// and still reproduce bit for bit.

#include <algorithm>
#include <functional>
#include <future>
#include <string>
#include <vector>

#include "supercone/clifford.hpp"
#include "supercone/dynamics.hpp"
#include "supercone/grassmann.hpp"
#include "supercone/measure.hpp"
#include "supercone/random.hpp"
#include "supercone/superforms.hpp"
#include "supercone/two_bit_form.hpp"

namespace supercone {

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  int samples = 200;
  /// Deliberate defect for mutation checks; "berezin-sign" flips the sign of
  /// every Berezin integral seen by the suites.
  std::string fault;
};

struct SuiteReport {
  explicit SuiteReport(std::string suite) : name(std::move(suite)) {}

  std::string name;
  int passed = 0;
  int failed = 0;
  std::vector<std::string> failures;

  bool ok() const { return failed == 0; }

  void check(bool cond, const std::string& what) {
    if (cond) {
      ++passed;
    } else {
      ++failed;
      if (failures.size() < 10) failures.push_back(what);
    }
  }
};

namespace detail {

inline std::uint64_t suite_seed(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (char c : name) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
  return seed ^ h;
}

inline SuiteReport algebra_suite(const VerifyOptions& opt) {
  SuiteReport r("algebra");
  Rng rng(suite_seed(opt.seed, r.name));
  auto ber = [&](const Multivector& f) { return opt.fault == "berezin-sign" ? -berezin(f) : berezin(f); };
  for (int m = 0; m <= 3; ++m) {
    Multivector top(m);
    top[top.top_mask()] = 1.0;
    r.check(ber(top) == Complex(1.0), "berezin(theta^1...theta^m) = 1 at m=" + std::to_string(m));
  }
  {
    const Multivector t1 = Multivector::generator(3, 0), t2 = Multivector::generator(3, 1),
                      t3 = Multivector::generator(3, 2);
    r.check(ber(7.0 * t2 * t1 * t3) == Complex(-7.0), "berezin(7 theta^2 theta^1 theta^3) = -7");
  }
  for (int s = 0; s < opt.samples; ++s) {
    const int m = uniform_int(rng, 0, 6);
    const Multivector a = random_integer_multivector(rng, m), b = random_integer_multivector(rng, m),
                      c = random_integer_multivector(rng, m);
    r.check((a * b) * c == a * (b * c), "associativity");
    r.check(dagger(dagger(a)) == a, "dagger involution");
    const int p = uniform_int(rng, 0, m), q = uniform_int(rng, 0, m);
    const Multivector hp = random_homogeneous(rng, m, p), hq = random_homogeneous(rng, m, q);
    r.check(hp * hq == ((p * q) % 2 ? -1.0 : 1.0) * (hq * hp), "graded commutativity");
    if (m >= 1) {
      const int a_idx = uniform_int(rng, 0, m - 1);
      const Multivector low = m >= 2 ? random_homogeneous(rng, m, uniform_int(rng, 0, m - 2)) : Multivector(m);
      r.check(ber(Multivector::generator(m, a_idx) * low) == Complex{}, "berezin of low grade vanishes");
    }
  }
  return r;
}

inline SuiteReport clifford_suite(const VerifyOptions& opt) {
  SuiteReport r("clifford");
  Rng rng(suite_seed(opt.seed, r.name));
  for (int m = 1; m <= 8; ++m) {
    const auto& rep = gamma_rep(m);
    double worst = 0.0;
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        const Eigen::MatrixXcd ac = rep.gamma(a) * rep.gamma(b) + rep.gamma(b) * rep.gamma(a);
        const Eigen::MatrixXcd want = (a == b ? 2.0 : 0.0) * Eigen::MatrixXcd::Identity(rep.dim(), rep.dim());
        worst = std::max(worst, (ac - want).cwiseAbs().maxCoeff());
      }
    }
    r.check(worst < 1e-14, "anticommutation at m=" + std::to_string(m));
  }
  for (int s = 0; s < opt.samples; ++s) {
    const int m = 2 * uniform_int(rng, 1, 2);
    const auto& rep = gamma_rep(m);
    const Multivector f = random_multivector(rng, m), g = random_multivector(rng, m);
    const Eigen::MatrixXd delta = Eigen::MatrixXd::Identity(m, m);
    const double diff = max_abs_diff(star_matrix(f, g, rep), vertical_star(f, g, delta));
    r.check(diff < 1e-12 * (1.0 + f.max_abs() * g.max_abs()), "star_matrix equals vertical_star");
    const Multivector h = random_hermitean(rng, m);
    r.check(soul_norm_bound_check(h, rep).ok, "soul norm bound");
    const Multivector hh = star_matrix(h, h, rep);
    r.check(body(hh).real() >= -1e-12, "body of a star square is non-negative");
    const Multivector k = random_hermitean(rng, m);
    const Multivector sum = hh + star_matrix(k, k, rep);
    const auto root = hermitean_sqrt(sum, rep);
    r.check(root.has_value() && max_abs_diff(star_matrix(*root, *root, rep), sum) < 1e-10 * (1.0 + sum.max_abs()),
            "sum of star squares is a star square");
  }
  return r;
}

inline SuiteReport measure_suite(const VerifyOptions& opt) {
  SuiteReport r("measure");
  Rng rng(suite_seed(opt.seed, r.name));
  const Indicators ind = indicators_m2();
  const Laboratory lab = make_laboratory(Eigen::MatrixXd::Identity(2, 2));
  Multivector total(2);
  for (const auto& x : ind.X) total += x;
  r.check(total == Multivector::scalar(2, 1.0), "indicators resolve unity");
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      r.check(std::abs(lab_inner(ind.psi[i], ind.X[j], lab) - (i == j ? 1.0 : 0.0)) < 1e-14,
              "(psi_i, X_j) = delta_ij");
    }
  }
  for (int s = 0; s < opt.samples; ++s) {
    const int m = uniform_int(rng, 1, 4);
    const Eigen::MatrixXd eta = random_spd(rng, m);
    const Multivector a = random_multivector(rng, m), b = random_multivector(rng, m), c = random_multivector(rng, m);
    const Multivector lhs = vertical_star(vertical_star(a, b, eta), c, eta);
    const Multivector rhs = vertical_star(a, vertical_star(b, c, eta), eta);
    r.check(max_abs_diff(lhs, rhs) < 1e-11 * (1.0 + lhs.max_abs()), "star associativity");
    const Multivector f = random_hermitean(rng, m);
    const Laboratory l = make_laboratory(eta);
    r.check(lab_inner(f, f, l) > 0.0, "inner product positivity");
    const Multivector g = random_hermitean(rng, m);
    r.check(is_state(star_square(f, eta) + star_square(g, eta), eta), "cone convexity");
    const Multivector x = random_hermitean(rng, m);
    const double raw = expectation(x, f, l);
    const Laboratory frame_lab = make_laboratory(Eigen::MatrixXd::Identity(m, m));
    const double framed = expectation(to_frame(x, l.frame), to_frame(f, l.frame), frame_lab);
    r.check(std::abs(raw - framed) < 1e-12 * (1.0 + std::abs(raw)), "frame invariance of expectations");
  }
  return r;
}

inline SuiteReport superforms_suite(const VerifyOptions& opt) {
  SuiteReport r("superforms");
  Rng rng(suite_seed(opt.seed, r.name));
  for (int s = 0; s < opt.samples; ++s) {
    const int n = uniform_int(rng, 1, 3), m = uniform_int(rng, 1, 3);
    const SuperForm f = random_superform(rng, n, m, 6);
    r.check(d_total(d_total(f)).is_zero(), "d_T^2 = 0");
    r.check((d_horiz(d_vert(f)) + d_vert(d_horiz(f))).is_zero(), "d and d-hat anticommute");
    const SuperForm g = d_vert(random_superform(rng, n, m, 6));
    r.check(max_abs_diff(d_vert(dhat_partial_inverse(g)), g) < 1e-12 * (1.0 + g.max_abs()),
            "d-hat of the partial inverse");
  }
  const int hodge_samples = std::max(1, opt.samples / 10);
  for (int s = 0; s < hodge_samples; ++s) {
    const int n = uniform_int(rng, 1, 3);
    const ClosedOmegaSample sample = random_closed_omega(rng, n, 2);
    const HodgeParts parts = hodge_decompose(sample.omega);
    const double err = max_abs_diff(hodge_reconstruct(parts), sample.omega);
    r.check(err < 1e-12 * (1.0 + sample.omega.max_abs()), "hodge reconstruction");
    const OmegaSplit split = split_omega(sample.omega);
    std::vector<double> x(n);
    for (auto& xi : x) xi = uniform(rng, -0.5, 0.5);
    const Eigen::MatrixXcd w0 = omega_blocks(sample.omega, x).W.body();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(w0);
    if (lu.dimensionOfKernel() == 1) {
      const Eigen::VectorXd rho0 = lu.kernel().col(0).real().normalized();
      const KernelLift lift = kernel_lift(split, rho0, x, 1e-9);
      r.check(lift.residual < 1e-12 * (1.0 + sample.omega.max_abs()), "kernel lift annihilates Omega");
    }
  }
  const SuperForm two_bit = two_bit_omega({Mat2::Identity()}, {1.0});
  r.check(split_omega(two_bit).residuals.max() == 0.0, "two-bit Omega is closed");
  return r;
}

inline SuiteReport dynamics_suite(const VerifyOptions& opt) {
  SuiteReport r("dynamics");
  Rng rng(suite_seed(opt.seed, r.name));
  const int runs = std::max(1, opt.samples / 20);
  for (int s = 0; s < runs; ++s) {
    TwoBitSystem sys;
    const Eigen::MatrixXd e = random_spd(rng, 2);
    sys.eta = EtaPath::constant(Mat2(e));
    sys.H = HPath::constant(uniform(rng, 0.5, 2.0));
    sys.t0 = 0.0;
    sys.t1 = 10.0;
    const double t = uniform(rng, 0.0, sys.t1);
    const Mat2 u = propagator_U(sys, 0.0, t);
    r.check((u.transpose() * sys.eta.base * u - sys.eta.base).cwiseAbs().maxCoeff() < 1e-10, "U^T eta U = eta");
    const Mat2 closed = closed_form_U(sys.H.value(0.0), sys.eta.base, 0.0, t);
    r.check((propagator_U(sys, t, 0.0) - closed).cwiseAbs().maxCoeff() < 1e-8, "closed form propagator");
    const StateFunction s0 = random_unit_state(rng);
    const double n0 = state_norm(s0, sys.eta.base);
    r.check(std::abs(state_norm(evolve(sys, s0, 0.0, t), sys.eta.base) - n0) < 1e-10, "norm conservation");

    TwoBitSystem moving;
    moving.eta = EtaPath::exp_scale(Mat2(e), uniform(rng, -0.5, 0.5));
    moving.H = HPath{{uniform(rng, 0.5, 2.0), uniform(rng, -0.2, 0.2)}};
    moving.t0 = 0.0;
    moving.t1 = 3.0;
    const double tm = uniform(rng, 0.2, 2.8);
    const StateFunction sm = evolve(moving, s0, 0.0, tm);
    r.check(std::abs(state_norm(sm, moving.eta.value(tm)) - state_norm(s0, moving.eta.value(0.0))) < 1e-9,
            "norm conservation with moving eta");
    const Observable x = Observable::constant(indicators_m2().X[uniform_int(rng, 0, 3)]);
    r.check(expectation_rate_check(moving, x, sm, tm).ok, "expectation rate law");
  }
  return r;
}

inline SuiteReport transition_suite(const VerifyOptions& opt) {
  SuiteReport r("transition");
  Rng rng(suite_seed(opt.seed, r.name));
  for (int s = 0; s < opt.samples; ++s) {
    const double h = uniform(rng, 0.2, 3.0), t1 = uniform(rng, -5.0, 5.0), t2 = uniform(rng, -5.0, 5.0);
    const Eigen::Matrix4d a = transition_matrix(h, 0.0, t1);
    r.check((a.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12, "row sums");
    r.check((a.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12, "column sums");
    const Eigen::Matrix4d b = transition_matrix(h, t1, t2);
    r.check((b * a - transition_matrix(h, 0.0, t2)).cwiseAbs().maxCoeff() < 1e-10, "flow property");
    const Eigen::Vector4cd ev = a.eigenvalues();
    r.check(ev.cwiseAbs().maxCoeff() <= 1.0 + 1e-10, "eigenvalues in the unit disk");
    const StateFunction s0 = random_unit_state(rng);
    const ProbabilityVector p0 = probabilities(s0);
    const Eigen::Vector4d q = a * Eigen::Vector4d(p0.p[0], p0.p[1], p0.p[2], p0.p[3]);
    r.check(delta_ellipsoid(q(0), q(1), q(2)) <= 1e-12, "evolved probabilities stay in the ellipsoid");
  }
  return r;
}

inline SuiteReport probability_suite(const VerifyOptions& opt) {
  SuiteReport r("probability");
  Rng rng(suite_seed(opt.seed, r.name));
  for (int s = 0; s < opt.samples; ++s) {
    const StateFunction st = (s % 10 == 0) ? random_boundary_state(rng) : random_unit_state(rng);
    const ProbabilityVector p = probabilities(st);
    bool in_range = true;
    for (double x : p.p) in_range = in_range && x >= -1e-12 && x <= 0.5 + 1e-12;
    r.check(in_range, "probabilities in [0, 1/2]");
    r.check(p.delta_ellipsoid <= 1e-12, "inside the ellipsoid");
    r.check(p.delta_cone <= 1e-12, "inside the cone");
    const ProbabilityVector back = probabilities(state_from_probabilities(p.p));
    double err = 0.0;
    for (int i = 0; i < 4; ++i) err = std::max(err, std::abs(back.p[i] - p.p[i]));
    r.check(err < 1e-10, "probability inversion round trip");
  }
  return r;
}

}  // namespace detail

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"algebra", "clifford", "measure", "superforms",
                                              "dynamics", "transition", "probability"};
  return names;
}

inline SuiteReport run_suite(const std::string& name, const VerifyOptions& opt) {
  if (name == "algebra") return detail::algebra_suite(opt);
  if (name == "clifford") return detail::clifford_suite(opt);
  if (name == "measure") return detail::measure_suite(opt);
  if (name == "superforms") return detail::superforms_suite(opt);
  if (name == "dynamics") return detail::dynamics_suite(opt);
  if (name == "transition") return detail::transition_suite(opt);
  if (name == "probability") return detail::probability_suite(opt);
  throw RangeError("unknown suite '" + name + "'");
}

/// Runs the named suites concurrently; reports come back in request order.
inline std::vector<SuiteReport> run_suites(const std::vector<std::string>& names, const VerifyOptions& opt) {
  std::vector<std::future<SuiteReport>> jobs;
  for (const auto& n : names) {
    if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end()) {
      throw RangeError("unknown suite '" + n + "'");
    }
    jobs.push_back(std::async(std::launch::async, [n, opt] {
      try {
        return run_suite(n, opt);
      } catch (const std::exception& e) {
        SuiteReport r(n);
        r.check(false, std::string("exception: ") + e.what());
        return r;
      }
    }));
  }
  std::vector<SuiteReport> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace supercone
