#pragma once

// Deterministic generators for property sweeps. Everything derives from
// std::mt19937_64 through uniform01 so that a seed fixes all outputs bit for
// bit on any platform (std::uniform_real_distribution is not portable).

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "supercone/dynamics.hpp"
#include "supercone/grassmann.hpp"
#include "supercone/superforms.hpp"

namespace supercone {

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

inline int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(uniform01(rng) * (hi - lo + 1));
}

inline double normal(Rng& rng) {
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Small-integer coefficients, so products and sums are exact in doubles.
inline Multivector random_integer_multivector(Rng& rng, int m, int bound = 3) {
  Multivector out(m);
  for (Mask s = 0; s < out.size(); ++s) {
    out[s] = Complex(uniform_int(rng, -bound, bound), uniform_int(rng, -bound, bound));
  }
  return out;
}

inline Multivector random_multivector(Rng& rng, int m) {
  Multivector out(m);
  for (Mask s = 0; s < out.size(); ++s) out[s] = Complex(normal(rng), normal(rng));
  return out;
}

/// Homogeneous element of the given grade with small-integer coefficients.
inline Multivector random_homogeneous(Rng& rng, int m, int k, int bound = 3) {
  Multivector out(m);
  for (Mask s = 0; s < out.size(); ++s) {
    if (grade_of(s) == k) out[s] = Complex(uniform_int(rng, -bound, bound), uniform_int(rng, -bound, bound));
  }
  return out;
}

/// Hermitean superfield: real coefficients on grades 0, 1 mod 4 and
/// imaginary ones on grades 2, 3 mod 4.
inline Multivector random_hermitean(Rng& rng, int m) {
  Multivector out(m);
  for (Mask s = 0; s < out.size(); ++s) {
    const double r = normal(rng);
    out[s] = reversion_sign(grade_of(s)) > 0 ? Complex(r, 0.0) : Complex(0.0, r);
  }
  return out;
}

inline Eigen::MatrixXd random_spd(Rng& rng, int m) {
  Eigen::MatrixXd b(m, m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) b(r, c) = normal(rng);
  }
  return b.transpose() * b + 0.5 * Eigen::MatrixXd::Identity(m, m);
}

/// Uniform point on the unit sphere in ℝ⁴, read as (φ, φ₁, φ₂, φ̄).
inline StateFunction random_unit_state(Rng& rng) {
  Eigen::Vector4d v;
  do {
    for (int i = 0; i < 4; ++i) v(i) = normal(rng);
  } while (v.norm() < 1e-8);
  v.normalize();
  return StateFunction{v(0), Vec2(v(1), v(2)), v(3)};
}

/// Unit state with φ² = 1/2, which lands on the ellipsoid boundary.
inline StateFunction random_boundary_state(Rng& rng) {
  Eigen::Vector3d v;
  do {
    for (int i = 0; i < 3; ++i) v(i) = normal(rng);
  } while (v.norm() < 1e-8);
  v = v.normalized() / std::sqrt(2.0);
  return StateFunction{1.0 / std::sqrt(2.0), Vec2(v(0), v(1)), v(2)};
}

/// Uniform point in the probability simplex {p ≥ 0, Σp = 1}.
inline std::array<double, 4> random_simplex(Rng& rng) {
  std::array<double, 4> e{};
  double sum = 0.0;
  for (auto& x : e) {
    x = -std::log(1.0 - uniform01(rng));
    sum += x;
  }
  for (auto& x : e) x /= sum;
  return e;
}

// ---------------------------------------------------------------------------
// Forms

/// Random polynomial form with `terms` terms of x-degree ≤ max_degree and
/// dθ-degree ≤ max_dtheta.
inline SuperForm random_superform(Rng& rng, int n, int m, int terms, int max_degree = 2, int max_dtheta = 2) {
  SuperForm out(n, m);
  for (int t = 0; t < terms; ++t) {
    TermKey k;
    int budget = uniform_int(rng, 0, max_degree);
    for (int i = 0; i < budget && n > 0; ++i) k.xpow[uniform_int(rng, 0, n - 1)]++;
    k.theta = static_cast<Mask>(uniform_int(rng, 0, (1 << m) - 1));
    k.dx = static_cast<Mask>(uniform_int(rng, 0, (1 << n) - 1));
    const int dt = m > 0 ? uniform_int(rng, 0, max_dtheta) : 0;
    for (int i = 0; i < dt; ++i) k.dtheta[uniform_int(rng, 0, m - 1)]++;
    out.add(k, Complex(uniform_int(rng, -4, 4), uniform_int(rng, -2, 2)));
  }
  return out;
}

/// Random polynomial coefficient c(x) of degree ≤ 1 (as a 0-form).
inline SuperForm random_linear_poly(Rng& rng, const SuperForm& like, double scale) {
  SuperForm out = like.constant(scale * normal(rng));
  for (int i = 0; i < like.n(); ++i) out += (scale * normal(rng)) * like.x(i);
  return out;
}

struct ClosedOmegaSample {
  SuperForm omega;
  HodgeParts parts;
};

/// Closed two-form built from random (ω₀, β, γ) through the reconstruction
/// formula. ω₀ is a constant part plus d of a bosonic 1-form; γ carries the
/// identity metric at the origin plus small x- and θ-dependent corrections.
inline ClosedOmegaSample random_closed_omega(Rng& rng, int n, int m) {
  const SuperForm like(n, m);
  SuperForm omega0 = like.like();
  for (int i = 0; i + 1 < n; i += 2) omega0 += like.dx(i) * like.dx(i + 1);
  SuperForm alpha = like.like();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) alpha += (0.3 * normal(rng)) * like.x(j) * like.x(j) * like.dx(i);
  }
  omega0 += d_horiz(alpha);

  SuperForm gamma = like.like();
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      SuperForm c = random_linear_poly(rng, like, 0.2);
      if (a == b) c += like.constant(0.5);
      gamma += c * like.theta(a) * like.dtheta(b);
    }
  }
  // odd higher θ-degree contributions, where m allows them
  for (Mask s = 0; s < (Mask{1} << m); ++s) {
    if (grade_of(s) < 3 || grade_of(s) % 2 == 0) continue;
    TermKey k;
    k.theta = s;
    k.dtheta[uniform_int(rng, 0, m - 1)] = 1;
    gamma.add(k, 0.3 * normal(rng));
  }

  SuperForm beta = like.like();
  for (Mask s = 1; s < (Mask{1} << m); ++s) {
    if (grade_of(s) % 2 != 0) continue;
    for (int i = 0; i < n; ++i) {
      TermKey k;
      k.theta = s;
      k.dx = Mask{1} << i;
      beta.add(k, 0.4 * normal(rng));
      if (n > 0) {
        k.xpow[uniform_int(rng, 0, n - 1)] = 1;
        beta.add(k, 0.4 * normal(rng));
      }
    }
  }

  ClosedOmegaSample out{like.like(), HodgeParts{omega0, beta, gamma}};
  out.omega = hodge_reconstruct(out.parts);
  return out;
}

}  // namespace supercone
