#pragma once

// Dense matrices with Grassmann-valued entries. Products respect entry order,
// so odd blocks behave correctly; determinants and inverses require every
// entry to be even, where the entries commute.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "supercone/errors.hpp"
#include "supercone/grassmann.hpp"

namespace supercone {

class MvMatrix {
 public:
  MvMatrix(int rows, int cols, int m)
      : rows_(rows), cols_(cols), m_(m),
        data_(static_cast<std::size_t>(rows) * cols, Multivector(m)) {}

  static MvMatrix identity(int dim, int m) {
    MvMatrix out(dim, dim, m);
    for (int i = 0; i < dim; ++i) out(i, i) = Multivector::scalar(m, 1.0);
    return out;
  }

  template <typename Derived>
  static MvMatrix from_body(const Eigen::MatrixBase<Derived>& mat, int m) {
    MvMatrix out(static_cast<int>(mat.rows()), static_cast<int>(mat.cols()), m);
    for (int r = 0; r < out.rows(); ++r) {
      for (int c = 0; c < out.cols(); ++c) {
        out(r, c) = Multivector::scalar(m, Complex(mat(r, c)));
      }
    }
    return out;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int m() const { return m_; }

  Multivector& operator()(int r, int c) { return data_[index(r, c)]; }
  const Multivector& operator()(int r, int c) const { return data_[index(r, c)]; }

  Eigen::MatrixXcd body() const {
    Eigen::MatrixXcd out(rows_, cols_);
    for (int r = 0; r < rows_; ++r) {
      for (int c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c)[0];
    }
    return out;
  }

  MvMatrix transpose() const {
    MvMatrix out(cols_, rows_, m_);
    for (int r = 0; r < rows_; ++r) {
      for (int c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    }
    return out;
  }

  bool all_even() const {
    for (const auto& e : data_) {
      if (e.parity() != 0) return false;
    }
    return true;
  }

  double max_abs() const {
    double out = 0.0;
    for (const auto& e : data_) out = std::max(out, e.max_abs());
    return out;
  }

  friend MvMatrix operator*(const MvMatrix& a, const MvMatrix& b) {
    if (a.cols_ != b.rows_ || a.m_ != b.m_) throw DimensionError("MvMatrix product shape mismatch");
    MvMatrix out(a.rows_, b.cols_, a.m_);
    for (int r = 0; r < a.rows_; ++r) {
      for (int c = 0; c < b.cols_; ++c) {
        Multivector acc(a.m_);
        for (int k = 0; k < a.cols_; ++k) acc += mul(a(r, k), b(k, c));
        out(r, c) = std::move(acc);
      }
    }
    return out;
  }

  friend MvMatrix operator+(MvMatrix a, const MvMatrix& b) {
    a.check_shape(b);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend MvMatrix operator-(MvMatrix a, const MvMatrix& b) {
    a.check_shape(b);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  friend MvMatrix operator-(MvMatrix a) {
    for (auto& e : a.data_) e *= -1.0;
    return a;
  }

 private:
  std::size_t index(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw RangeError("MvMatrix index out of range");
    return static_cast<std::size_t>(r) * cols_ + c;
  }

  void check_shape(const MvMatrix& o) const {
    if (o.rows_ != rows_ || o.cols_ != cols_ || o.m_ != m_) {
      throw DimensionError("MvMatrix shape mismatch");
    }
  }

  int rows_, cols_, m_;
  std::vector<Multivector> data_;
};

namespace detail {

inline void require_square_even(const MvMatrix& a, const char* what) {
  if (a.rows() != a.cols()) throw DimensionError(std::string(what) + " needs a square matrix");
  if (!a.all_even()) throw ContractViolation(std::string(what) + " needs even entries");
}

inline int pick_pivot(const MvMatrix& a, int col, int from) {
  int best = -1;
  double best_abs = 0.0;
  for (int r = from; r < a.rows(); ++r) {
    const double v = std::abs(a(r, col)[0]);
    if (v > best_abs) {
      best = r;
      best_abs = v;
    }
  }
  return best;
}

inline void swap_rows(MvMatrix& a, int r1, int r2) {
  for (int c = 0; c < a.cols(); ++c) std::swap(a(r1, c), a(r2, c));
}

}  // namespace detail

/// Determinant of a matrix with even entries, by elimination on the body.
inline Multivector det(MvMatrix a) {
  detail::require_square_even(a, "det");
  const int n = a.rows();
  Multivector out = Multivector::scalar(a.m(), 1.0);
  for (int p = 0; p < n; ++p) {
    const int piv = detail::pick_pivot(a, p, p);
    if (piv < 0) return Multivector(a.m());
    if (piv != p) {
      detail::swap_rows(a, piv, p);
      out *= -1.0;
    }
    out = mul(out, a(p, p));
    const Multivector inv = inverse(a(p, p));
    for (int r = p + 1; r < n; ++r) {
      const Multivector f = mul(a(r, p), inv);
      for (int c = p; c < n; ++c) a(r, c) -= mul(f, a(p, c));
    }
  }
  return out;
}

/// Inverse of a matrix with even entries and invertible body.
inline MvMatrix inverse(MvMatrix a) {
  detail::require_square_even(a, "inverse");
  const int n = a.rows();
  MvMatrix out = MvMatrix::identity(n, a.m());
  for (int p = 0; p < n; ++p) {
    const int piv = detail::pick_pivot(a, p, p);
    if (piv < 0) throw DegenerateMetric("matrix body is singular");
    if (piv != p) {
      detail::swap_rows(a, piv, p);
      detail::swap_rows(out, piv, p);
    }
    const Multivector inv = inverse(a(p, p));
    for (int c = 0; c < n; ++c) {
      a(p, c) = mul(inv, a(p, c));
      out(p, c) = mul(inv, out(p, c));
    }
    for (int r = 0; r < n; ++r) {
      if (r == p) continue;
      const Multivector f = a(r, p);
      if (f.is_zero()) continue;
      for (int c = 0; c < n; ++c) {
        a(r, c) -= mul(f, a(p, c));
        out(r, c) -= mul(f, out(p, c));
      }
    }
  }
  return out;
}

/// Berezinian of [[w, a], [c, n]] via the fiber Schur complement:
/// det(w − a n⁻¹ c) / det(n).
inline Multivector berezinian_fiber(const MvMatrix& w, const MvMatrix& a, const MvMatrix& c,
                                    const MvMatrix& n) {
  const Multivector dn = det(n);
  if (dn[0] == Complex{}) throw DegenerateMetric("fiber block is singular");
  return mul(det(w - a * inverse(n) * c), inverse(dn));
}

/// Berezinian of [[w, a], [c, n]] via the base Schur complement:
/// det(w) / det(n − c w⁻¹ a).
inline Multivector berezinian_base(const MvMatrix& w, const MvMatrix& a, const MvMatrix& c,
                                   const MvMatrix& n) {
  const Multivector ds = det(n - c * inverse(w) * a);
  if (ds[0] == Complex{}) throw DegenerateMetric("fiber Schur complement is singular");
  return mul(det(w), inverse(ds));
}

}  // namespace supercone
