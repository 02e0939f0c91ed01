#pragma once

// Fiber measures and the vertical star product.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "supercone/clifford.hpp"
#include "supercone/errors.hpp"
#include "supercone/grassmann.hpp"
#include "supercone/supermatrix.hpp"
#include "supercone/superforms.hpp"

namespace supercone {

/// Checks that η is a symmetric m×m matrix, invertible, and (optionally) SPD.
inline void check_metric(const Eigen::MatrixXd& eta, int m, bool require_spd) {
  if (eta.rows() != m || eta.cols() != m) {
    throw DimensionError("metric must be " + std::to_string(m) + "x" + std::to_string(m));
  }
  if (m == 0) return;
  const double scale = eta.cwiseAbs().maxCoeff();
  if ((eta - eta.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + scale)) {
    throw ContractViolation("metric is not symmetric");
  }
  if (require_spd) {
    Eigen::LLT<Eigen::MatrixXd> llt(eta);
    if (llt.info() != Eigen::Success) throw DegenerateMetric("metric is not positive definite");
  } else if (Eigen::FullPivLU<Eigen::MatrixXd>(eta).rank() < m) {
    throw DegenerateMetric("metric is singular");
  }
}

/// (exp η⁻¹)(F, G) = Σ_k c_k η^{a₁b₁}⋯η^{a_k b_k} (F ←∂_{a₁}⋯←∂_{a_k})(∂_{b₁}⋯∂_{b_k} G).
/// Right derivatives act on F and left derivatives on G. The default weights
/// are c_k = 1/k!.
inline Multivector vertical_star(const Multivector& f, const Multivector& g, const Eigen::MatrixXd& eta,
                                 const std::vector<double>& weights = {}) {
  f.check_same(g);
  const int m = f.m();
  check_metric(eta, m, false);
  const Eigen::MatrixXd eta_inv = m > 0 ? Eigen::MatrixXd(eta.inverse()) : Eigen::MatrixXd();

  using Table = std::unordered_map<std::uint64_t, Complex>;
  auto key = [](Mask s, Mask t) { return (std::uint64_t{s} << 32) | t; };

  Table level;
  for (Mask s = 0; s < f.size(); ++s) {
    if (f[s] == Complex{}) continue;
    for (Mask t = 0; t < g.size(); ++t) {
      if (g[t] != Complex{}) level[key(s, t)] += f[s] * g[t];
    }
  }

  Multivector out(m);
  double factorial = 1.0;
  for (int k = 0; !level.empty(); ++k) {
    if (k > 0) factorial *= k;
    const double weight = k < static_cast<int>(weights.size()) ? weights[k] : 1.0 / factorial;
    for (const auto& [st, c] : level) {
      const Mask s = static_cast<Mask>(st >> 32), t = static_cast<Mask>(st & 0xffffffffu);
      if ((s & t) != 0) continue;
      out[s | t] += weight * static_cast<double>(reorder_sign(s, t)) * c;
    }
    Table next;
    for (const auto& [st, c] : level) {
      const Mask s = static_cast<Mask>(st >> 32), t = static_cast<Mask>(st & 0xffffffffu);
      for (Mask sa = s; sa != 0; sa &= sa - 1) {
        const int a = std::countr_zero(sa);
        const Mask abit = Mask{1} << a;
        const int above = std::popcount(s & ~((abit << 1) - 1));
        for (Mask tb = t; tb != 0; tb &= tb - 1) {
          const int b = std::countr_zero(tb);
          const double e = eta_inv(a, b);
          if (e == 0.0) continue;
          const Mask bbit = Mask{1} << b;
          const int below = std::popcount(t & (bbit - 1));
          const double sign = ((above + below) & 1) ? -1.0 : 1.0;
          next[key(s ^ abit, t ^ bbit)] += sign * e * c;
        }
      }
    }
    level = std::move(next);
  }
  return out;
}

inline Multivector star_square(const Multivector& f, const Eigen::MatrixXd& eta) {
  return vertical_star(f, f, eta);
}

/// Fiber at a fixed base point, with an orthonormal frame θ̄ = E θ where
/// E is the upper Cholesky factor, η = EᵀE.
struct Laboratory {
  std::string label;
  double time = 0.0;
  Eigen::MatrixXd eta;
  Eigen::MatrixXd frame;

  int m() const { return static_cast<int>(eta.rows()); }
};

inline Laboratory make_laboratory(const Eigen::MatrixXd& eta, double time = 0.0,
                                  std::string label = "lab") {
  check_metric(eta, static_cast<int>(eta.rows()), true);
  Laboratory lab{std::move(label), time, eta, Eigen::MatrixXd()};
  lab.frame = eta.rows() > 0 ? Eigen::MatrixXd(eta.llt().matrixU()) : Eigen::MatrixXd(0, 0);
  return lab;
}

/// Components of F with respect to the orthonormal frame θ̄.
inline Multivector to_frame(const Multivector& f, const Eigen::MatrixXd& frame) {
  if (f.m() == 0) return f;
  const Eigen::MatrixXd inv_t = frame.inverse().transpose();
  return substitute(f, inv_t.cast<Complex>());
}

inline Multivector from_frame(const Multivector& f, const Eigen::MatrixXd& frame) {
  if (f.m() == 0) return f;
  return substitute(f, frame.transpose().cast<Complex>());
}

inline void require_hermitean(const Multivector& f, const char* what) {
  if (!is_hermitean(f, 1e-12 * (1.0 + f.max_abs()))) {
    throw ContractViolation(std::string(what) + " needs hermitean superfields");
  }
}

/// (F, G) = ∫ Ber(Ω*) Θ(Ω*) F⋆G over a zero-dimensional base, i.e. the body of F⋆G.
inline double lab_inner(const Multivector& f, const Multivector& g, const Laboratory& lab) {
  require_hermitean(f, "lab_inner");
  require_hermitean(g, "lab_inner");
  return body(vertical_star(f, g, lab.eta)).real();
}

/// ⟨X⟩ = body(Φ⋆X⋆Φ) / body(Φ⋆Φ).
inline double expectation(const Multivector& x, const Multivector& phi, const Laboratory& lab) {
  require_hermitean(x, "expectation");
  require_hermitean(phi, "expectation");
  const double den = body(vertical_star(phi, phi, lab.eta)).real();
  if (!(den > 0.0)) throw ZeroNorm("expectation needs a state function with non-zero norm");
  const Multivector xphi = vertical_star(x, phi, lab.eta);
  return body(vertical_star(phi, xphi, lab.eta)).real() / den;
}

/// Whether Ψ is a star square of a hermitean superfield for the metric η.
/// Decided through the matrix representation in an orthonormal frame; odd m
/// is embedded into m+1 generators.
inline bool is_state(const Multivector& psi, const Eigen::MatrixXd& eta, double tol = 1e-12) {
  const int m = psi.m();
  check_metric(eta, m, true);
  if (!is_hermitean(psi, tol * (1.0 + psi.max_abs()))) return false;
  if (m == 0) return psi[0].real() >= -tol;
  const Multivector framed = to_frame(psi, Eigen::MatrixXd(eta.llt().matrixU()));
  const int even_m = m % 2 == 0 ? m : m + 1;
  return hermitean_sqrt(embed(framed, even_m), gamma_rep(even_m), tol).has_value();
}

struct Indicators {
  std::array<Multivector, 4> psi;
  std::array<Multivector, 4> X;
};

/// Tetrahedral indicators for m = 2; X_i = (ψ_i + 2)/12 resolve unity.
inline Indicators indicators_m2() {
  const Complex i{0.0, 1.0};
  const double r2 = std::sqrt(2.0), r6 = std::sqrt(6.0), r8 = std::sqrt(8.0);
  auto field = [](Complex c0, Complex c1, Complex c2, Complex c12) {
    Multivector f(2);
    f[0] = c0;
    f[1] = c1;
    f[2] = c2;
    f[3] = c12;
    return f;
  };
  Indicators out;
  out.psi[0] = field(1.0, r8, 0.0, i);
  out.psi[1] = field(1.0, -r2, r6, i);
  out.psi[2] = field(1.0, -r2, -r6, i);
  out.psi[3] = field(1.0, 0.0, 0.0, -3.0 * i);
  for (int k = 0; k < 4; ++k) out.X[k] = (out.psi[k] + Multivector::scalar(2, 2.0)) / 12.0;
  return out;
}

// ---------------------------------------------------------------------------
// Superdeterminant and volumes

/// sdet for plain number blocks with Grassmann-odd mixing blocks treated as
/// absent: det(ω − A η⁻¹ Aᵀ) / det η.
inline double sdet_blocks(const Eigen::MatrixXd& omega, const Eigen::MatrixXd& a, const Eigen::MatrixXd& eta) {
  check_metric(eta, static_cast<int>(eta.rows()), false);
  if (a.rows() != omega.rows() || a.cols() != eta.rows()) throw DimensionError("sdet block shapes");
  return (omega - a * eta.inverse() * a.transpose()).determinant() / eta.determinant();
}

/// Metric η at a point for a form written Ω ⊃ i η_ab dθ^a dθ^b.
inline Eigen::MatrixXd fiber_metric(const SuperForm& big_omega, const std::vector<double>& point) {
  const Eigen::MatrixXcd n = fiber_block_body(big_omega, point);
  const Eigen::MatrixXcd eta = n / Complex(0.0, 2.0);
  if (eta.size() > 0 && eta.imag().cwiseAbs().maxCoeff() > 1e-12 * (1.0 + eta.cwiseAbs().maxCoeff())) {
    throw ContractViolation("fiber metric is not real");
  }
  return eta.real();
}

/// Superdeterminant of Ω at a point, from the blocks of its contractions.
/// The fiber block is the metric η (Ω ⊃ i η_ab dθ^a dθ^b).
inline Multivector sdet(const OmegaSplit& split, const std::vector<double>& point) {
  const SuperForm big = split.assemble();
  OmegaBlocks b = omega_blocks(big, point);
  const Complex to_metric = 1.0 / Complex(0.0, 2.0);
  MvMatrix g = b.N;
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) g(r, c) *= to_metric;
  }
  return berezinian_fiber(b.W, b.A, b.B, g);
}

/// Θ = √det η · θ¹⋯θᵐ.
inline Multivector theta_volume(const Eigen::MatrixXd& eta) {
  const int m = static_cast<int>(eta.rows());
  check_metric(eta, m, false);
  const double d = m > 0 ? eta.determinant() : 1.0;
  if (!(d > 0.0)) throw DomainError("theta_volume needs det(eta) > 0");
  Multivector out(m);
  out[out.top_mask()] = std::sqrt(d);
  return out;
}

inline Multivector theta_volume(const OmegaSplit& split, const std::vector<double>& point) {
  return theta_volume(fiber_metric(split.assemble(), point));
}

/// Pfaffian of an antisymmetric matrix by expansion along the first row.
inline Complex pfaffian(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return 1.0;
  if (n % 2 == 1) return 0.0;
  Complex out{};
  for (Eigen::Index j = 1; j < n; ++j) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 1; k < n; ++k) {
      if (k != j) keep.push_back(k);
    }
    Eigen::MatrixXcd minor(n - 2, n - 2);
    for (std::size_t r = 0; r < keep.size(); ++r) {
      for (std::size_t c = 0; c < keep.size(); ++c) minor(r, c) = a(keep[r], keep[c]);
    }
    out += ((j % 2 == 1) ? 1.0 : -1.0) * a(0, j) * pfaffian(minor);
  }
  return out;
}

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
  int points = 33;  ///< grid points per axis
};

namespace detail {

inline void for_each_grid_point(const Box& box, int n,
                                const std::function<void(const std::vector<double>&, double)>& visit) {
  if (static_cast<int>(box.lo.size()) != n || static_cast<int>(box.hi.size()) != n) {
    throw DimensionError("integration box has wrong dimension");
  }
  if (n > 0 && box.points < 2) throw RangeError("integration grid needs at least two points");
  std::vector<int> idx(n, 0);
  std::vector<double> x(n);
  while (true) {
    double w = 1.0;
    for (int i = 0; i < n; ++i) {
      const double h = (box.hi[i] - box.lo[i]) / (box.points - 1);
      x[i] = box.lo[i] + h * idx[i];
      w *= (idx[i] == 0 || idx[i] == box.points - 1) ? 0.5 * h : h;
    }
    visit(x, w);
    int i = 0;
    for (; i < n; ++i) {
      if (++idx[i] < box.points) break;
      idx[i] = 0;
    }
    if (i == n) break;
  }
}

}  // namespace detail

/// ∫ Ber(Ω) Θ(Ω) F over a box, with sdet^{1/2} and Θ evaluated pointwise
/// and the base integral done by the trapezoid rule.
inline Complex super_integral(const OmegaSplit& split, const SuperForm& f, const Box& box) {
  const SuperForm big = split.assemble();
  Complex total{};
  detail::for_each_grid_point(box, big.n(), [&](const std::vector<double>& x, double w) {
    const Multivector ber = sdet(split, x);
    const Multivector fx = coefficient_at(f, x, 0, {});
    total += w * berezin(mul(mul(sqrt_even(ber), theta_volume(split, x)), fx));
  });
  return total;
}

/// ∫ ω₀^{n/2}/(n/2)! F₀ over the same box: the body-only reduction.
inline Complex reduced_integral(const OmegaSplit& split, const SuperForm& f, const Box& box) {
  const SuperForm big = split.assemble();
  Complex total{};
  detail::for_each_grid_point(box, big.n(), [&](const std::vector<double>& x, double w) {
    const Eigen::MatrixXcd w0 = omega_blocks(split.omega0, x).W.body();
    total += w * pfaffian(w0) * coefficient_at(f, x, 0, {})[0];
  });
  return total;
}

}  // namespace supercone
