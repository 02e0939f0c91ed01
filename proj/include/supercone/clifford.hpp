#pragma once

// Gamma-matrix representation of the Clifford algebra generated by θ¹..θᵐ
// with θᵃθᵇ + θᵇθᵃ = 2δᵃᵇ, and the σ-map taking superfields to matrices.

#include <array>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "supercone/errors.hpp"
#include "supercone/grassmann.hpp"

namespace supercone {

/// A matrix with exactly one non-zero entry per row: entry (r, col[r]) = val[r].
struct MonomialMatrix {
  std::vector<int> col;
  std::vector<Complex> val;

  static MonomialMatrix identity(int dim) {
    MonomialMatrix out;
    out.col.resize(dim);
    out.val.assign(dim, Complex{1.0});
    for (int r = 0; r < dim; ++r) out.col[r] = r;
    return out;
  }

  static MonomialMatrix from_dense(const Eigen::MatrixXcd& m) {
    MonomialMatrix out;
    out.col.assign(m.rows(), -1);
    out.val.assign(m.rows(), Complex{});
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (m(r, c) == Complex{}) continue;
        if (out.col[r] != -1) throw ContractViolation("matrix is not monomial");
        out.col[r] = static_cast<int>(c);
        out.val[r] = m(r, c);
      }
      if (out.col[r] == -1) throw ContractViolation("matrix has a zero row");
    }
    return out;
  }

  int dim() const { return static_cast<int>(col.size()); }

  friend MonomialMatrix operator*(const MonomialMatrix& a, const MonomialMatrix& b) {
    MonomialMatrix out;
    out.col.resize(a.dim());
    out.val.resize(a.dim());
    for (int r = 0; r < a.dim(); ++r) {
      const int mid = a.col[r];
      out.col[r] = b.col[mid];
      out.val[r] = a.val[r] * b.val[mid];
    }
    return out;
  }

  Eigen::MatrixXcd dense() const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim(), dim());
    for (int r = 0; r < dim(); ++r) out(r, col[r]) = val[r];
    return out;
  }

  /// tr(this† · m).
  Complex adjoint_trace(const Eigen::MatrixXcd& m) const {
    Complex out{};
    for (int r = 0; r < dim(); ++r) out += std::conj(val[r]) * m(r, col[r]);
    return out;
  }
};

class GammaRep {
 public:
  int m() const { return m_; }
  int dim() const { return dim_; }
  const std::vector<Eigen::MatrixXcd>& gammas() const { return gammas_; }
  const Eigen::MatrixXcd& gamma(int a) const { return gammas_.at(a); }

  /// Ordered product γ^{a₁}⋯γ^{a_k} for the generators in `mask`.
  const MonomialMatrix& product(Mask mask) const { return products_.at(mask); }

  friend GammaRep build_gammas(int m);

 private:
  int m_ = 0;
  int dim_ = 1;
  std::vector<Eigen::MatrixXcd> gammas_;
  std::vector<MonomialMatrix> products_;
};

/// Jordan–Wigner ladder: passing from 2k to 2k+2 generators maps γᵢ ↦ γᵢ⊗I
/// and appends Z^{⊗k}⊗X, Z^{⊗k}⊗Y. Odd m appends Z^{⊗k} as the last gamma.
inline GammaRep build_gammas(int m) {
  if (m < 1 || m > kMaxGenerators) {
    throw RangeError("gamma representation needs 1 <= m <= " +
                     std::to_string(kMaxGenerators));
  }
  using Mat = Eigen::MatrixXcd;
  const Complex i{0.0, 1.0};
  Mat px(2, 2), py(2, 2), pz(2, 2);
  px << 0, 1, 1, 0;
  py << 0, -i, i, 0;
  pz << 1, 0, 0, -1;

  auto kron = [](const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      for (Eigen::Index c = 0; c < a.cols(); ++c) {
        out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
      }
    }
    return out;
  };

  std::vector<Mat> gammas;
  Mat chirality = Mat::Identity(1, 1);
  for (int level = 0; level < m / 2; ++level) {
    const Mat id2 = Mat::Identity(2, 2);
    for (auto& g : gammas) g = kron(g, id2);
    gammas.push_back(kron(chirality, px));
    gammas.push_back(kron(chirality, py));
    chirality = kron(chirality, pz);
  }
  if (m % 2 == 1) gammas.push_back(chirality);

  GammaRep rep;
  rep.m_ = m;
  rep.dim_ = static_cast<int>(chirality.rows());
  rep.gammas_ = std::move(gammas);

  std::vector<MonomialMatrix> factors;
  for (const auto& g : rep.gammas_) factors.push_back(MonomialMatrix::from_dense(g));
  rep.products_.resize(std::size_t{1} << m);
  rep.products_[0] = MonomialMatrix::identity(rep.dim_);
  for (Mask s = 1; s < rep.products_.size(); ++s) {
    const int top = 31 - std::countl_zero(s);
    rep.products_[s] = rep.products_[s ^ (Mask{1} << top)] * factors[top];
  }
  return rep;
}

/// Shared, lazily built representation for each m; safe to call concurrently.
inline const GammaRep& gamma_rep(int m) {
  if (m < 1 || m > kMaxGenerators) {
    throw RangeError("gamma representation needs 1 <= m <= " +
                     std::to_string(kMaxGenerators));
  }
  static std::array<std::once_flag, kMaxGenerators + 1> flags;
  static std::array<std::unique_ptr<GammaRep>, kMaxGenerators + 1> reps;
  std::call_once(flags[m], [m] { reps[m] = std::make_unique<GammaRep>(build_gammas(m)); });
  return *reps[m];
}

inline void check_rep(const Multivector& f, const GammaRep& rep) {
  if (f.m() != rep.m()) {
    throw DimensionError("multivector has m=" + std::to_string(f.m()) +
                         " but representation has m=" + std::to_string(rep.m()));
  }
}

inline void require_even(const GammaRep& rep, const char* what) {
  if (rep.m() % 2 != 0) {
    throw UnsupportedRepresentation(std::string(what) +
                                    " needs an even generator count; embed odd m into m+1");
  }
}

inline Eigen::MatrixXcd sigma(const Multivector& f, const GammaRep& rep) {
  check_rep(f, rep);
  const int dim = rep.dim();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (Mask s = 0; s < f.size(); ++s) {
    const Complex c = f[s];
    if (c == Complex{}) continue;
    const auto& p = rep.product(s);
    for (int r = 0; r < dim; ++r) out(r, p.col[r]) += c * p.val[r];
  }
  return out;
}

/// Inverse of σ for even m via Hilbert–Schmidt orthogonality of the
/// ordered gamma products: c_S = tr(P_S† M) / D.
inline Multivector sigma_inverse(const Eigen::MatrixXcd& mat, const GammaRep& rep) {
  require_even(rep, "sigma_inverse");
  if (mat.rows() != rep.dim() || mat.cols() != rep.dim()) {
    throw DimensionError("matrix size does not match the representation");
  }
  Multivector out(rep.m());
  const double inv_dim = 1.0 / rep.dim();
  for (Mask s = 0; s < out.size(); ++s) out[s] = rep.product(s).adjoint_trace(mat) * inv_dim;
  return out;
}

inline Multivector star_matrix(const Multivector& f, const Multivector& g, const GammaRep& rep) {
  require_even(rep, "star_matrix");
  check_rep(f, rep);
  check_rep(g, rep);
  return sigma_inverse(sigma(f, rep) * sigma(g, rep), rep);
}

/// (F, G) = tr(σ(F)σ(G)) / D.
inline Complex trace_inner(const Multivector& f, const Multivector& g, const GammaRep& rep) {
  require_even(rep, "trace_inner");
  check_rep(f, rep);
  check_rep(g, rep);
  return (sigma(f, rep) * sigma(g, rep)).trace() / static_cast<double>(rep.dim());
}

struct SoulNormBound {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

/// ‖𝒰‖² against (√D + 1)² − 1/5 for 𝒰 = F⋆F/‖F‖² − 1.
inline SoulNormBound soul_norm_bound_check(const Multivector& f, const GammaRep& rep) {
  require_even(rep, "soul_norm_bound_check");
  check_rep(f, rep);
  if (!is_hermitean(f, 1e-14 * (1.0 + f.max_abs()))) {
    throw ContractViolation("soul norm bound needs a hermitean superfield");
  }
  const Eigen::MatrixXcd s = sigma(f, rep);
  const double dim = rep.dim();
  const double norm2 = (s * s).trace().real() / dim;
  if (norm2 == 0.0) throw ZeroNorm("soul norm bound needs a non-zero superfield");
  const Eigen::MatrixXcd u =
      s * s / norm2 - Eigen::MatrixXcd::Identity(rep.dim(), rep.dim());
  SoulNormBound out;
  out.lhs = (u * u).trace().real() / dim;
  out.rhs = (std::sqrt(dim) + 1.0) * (std::sqrt(dim) + 1.0) - 0.2;
  out.ok = out.lhs <= out.rhs + 1e-10;
  return out;
}

/// Hermitean F with F⋆F = Ψ, found from the positive square root of σ(Ψ).
/// Empty when σ(Ψ) has an eigenvalue below -tol (Ψ is not a star square).
inline std::optional<Multivector> hermitean_sqrt(const Multivector& psi, const GammaRep& rep,
                                                 double tol = 1e-12) {
  require_even(rep, "hermitean_sqrt");
  check_rep(psi, rep);
  const Eigen::MatrixXcd s = sigma(psi, rep);
  if ((s - s.adjoint()).cwiseAbs().maxCoeff() > tol * (1.0 + s.cwiseAbs().maxCoeff())) {
    return std::nullopt;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (s + s.adjoint()));
  const Eigen::VectorXd lambda = eig.eigenvalues();
  const double scale = 1.0 + lambda.cwiseAbs().maxCoeff();
  if (lambda.minCoeff() < -tol * scale) return std::nullopt;
  const Eigen::VectorXd root = lambda.cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXcd r =
      eig.eigenvectors() * root.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
  return sigma_inverse(r, rep);
}

}  // namespace supercone
