#pragma once

// The two-bit system as a super phase-spacetime ℝ^{1|2} with time t = x⁰.

#include <vector>

#include "supercone/dynamics.hpp"
#include "supercone/superforms.hpp"

namespace supercone {

/// Σ_k c_k t^k as a 0-form on ℝ^{1|2}.
inline SuperForm time_polynomial(const SuperForm& like, const std::vector<double>& coeffs) {
  SuperForm out = like.like();
  SuperForm power = like.constant(1.0);
  for (double c : coeffs) {
    out += c * power;
    power = power * like.x(0);
  }
  return out;
}

/// ξ = i η_ab(t) θ^a dθ^b + (i/2) H(t) ε_ab θ^a θ^b dt, for polynomial η and H.
inline SuperForm two_bit_potential(const std::vector<Mat2>& eta_coeffs, const std::vector<double>& h_coeffs) {
  const SuperForm like(1, 2);
  const Complex i{0.0, 1.0};
  SuperForm xi = like.like();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      std::vector<double> c;
      for (const auto& m : eta_coeffs) c.push_back(m(a, b));
      xi += i * (time_polynomial(like, c) * like.theta(a) * like.dtheta(b));
    }
  }
  const Mat2 eps = levi_civita();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      if (eps(a, b) == 0.0) continue;
      xi += (0.5 * eps(a, b)) * i *
            (time_polynomial(like, h_coeffs) * like.theta(a) * like.theta(b) * like.dx(0));
    }
  }
  return xi;
}

/// Ω = d_T ξ.
inline SuperForm two_bit_omega(const std::vector<Mat2>& eta_coeffs, const std::vector<double>& h_coeffs) {
  return d_total(two_bit_potential(eta_coeffs, h_coeffs));
}

}  // namespace supercone
