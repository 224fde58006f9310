#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncsched {

/// Dense real matrix with row-major storage. Sized for control problems with
/// state dimension up to ~10; everything is plain O(n^3) with no blocking.
class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("Matrix: zero dimension");
  }

  Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    if (rows_ == 0) throw std::invalid_argument("Matrix: empty initializer");
    cols_ = rows.begin()->size();
    a_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("Matrix: ragged initializer");
      a_.insert(a_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return a_.empty(); }
  bool is_square() const { return rows_ == cols_ && rows_ > 0; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  const std::vector<double>& data() const { return a_; }

  bool all_finite() const {
    return std::all_of(a_.begin(), a_.end(), [](double v) { return std::isfinite(v); });
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }

  double max_asymmetry() const {
    require_square("max_asymmetry");
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
    return m;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// (M + M^T)/2; used before every operation that assumes symmetry.
  Matrix symmetrized() const {
    require_square("symmetrized");
    Matrix s(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) s(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
    return s;
  }

  friend Matrix operator+(const Matrix& x, const Matrix& y) {
    x.require_same_shape(y, "operator+");
    Matrix r = x;
    for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] += y.a_[k];
    return r;
  }

  friend Matrix operator-(const Matrix& x, const Matrix& y) {
    x.require_same_shape(y, "operator-");
    Matrix r = x;
    for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] -= y.a_[k];
    return r;
  }

  friend Matrix operator*(double s, const Matrix& x) {
    Matrix r = x;
    for (double& v : r.a_) v *= s;
    return r;
  }

  friend Matrix operator*(const Matrix& x, double s) { return s * x; }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols_ != y.rows_) throw std::invalid_argument("operator*: inner dimension mismatch");
    Matrix r(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        const double xik = x(i, k);
        if (xik == 0.0) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) r(i, j) += xik * y(k, j);
      }
    return r;
  }

  void require_square(const char* who) const {
    if (!is_square()) throw std::invalid_argument(std::string(who) + ": matrix must be square");
  }

  void require_same_shape(const Matrix& o, const char* who) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument(std::string(who) + ": shape mismatch");
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

using Vec = std::vector<double>;

inline Vec matvec(const Matrix& m, const Vec& x) {
  if (m.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
  Vec y(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) y[i] += m(i, j) * x[j];
  return y;
}

inline double norm2(const Vec& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline double quadratic_form(const Matrix& p, const Vec& x) {
  Vec px = matvec(p, x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * px[i];
  return s;
}

/// Kronecker product, consistent with column-major vec() below:
/// vec(M X N) = (N^T kron M) vec(X).
inline Matrix kron(const Matrix& x, const Matrix& y) {
  Matrix r(x.rows() * y.rows(), x.cols() * y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const double xij = x(i, j);
      if (xij == 0.0) continue;
      for (std::size_t k = 0; k < y.rows(); ++k)
        for (std::size_t l = 0; l < y.cols(); ++l)
          r(i * y.rows() + k, j * y.cols() + l) = xij * y(k, l);
    }
  return r;
}

/// Column-major stacking of a matrix into a column vector.
inline Matrix vec(const Matrix& m) {
  Matrix v(m.rows() * m.cols(), 1);
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) v(j * m.rows() + i, 0) = m(i, j);
  return v;
}

inline Matrix unvec(const Matrix& v, std::size_t rows, std::size_t cols) {
  if (v.rows() != rows * cols || v.cols() != 1) throw std::invalid_argument("unvec: bad shape");
  Matrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = v(j * rows + i, 0);
  return m;
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// b may have several columns. Throws on (numerically) singular A.
inline Matrix lu_solve(Matrix a, Matrix b) {
  a.require_square("lu_solve");
  if (b.rows() != a.rows()) throw std::invalid_argument("lu_solve: rhs dimension mismatch");
  const std::size_t n = a.rows();
  const std::size_t m = b.cols();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) < 1e-300)
      throw std::runtime_error("lu_solve: singular linear system");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      for (std::size_t j = 0; j < m; ++j) std::swap(b(col, j), b(piv, j));
    }
    const double d = a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / d;
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      for (std::size_t j = 0; j < m; ++j) b(r, j) -= f * b(col, j);
    }
  }
  Matrix x(n, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = n; i-- > 0;) {
      double s = b(i, j);
      for (std::size_t k = i + 1; k < n; ++k) s -= a(i, k) * x(k, j);
      x(i, j) = s / a(i, i);
    }
  return x;
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
/// Returns false (leaving l unspecified) when the matrix is not PD.
inline bool cholesky(const Matrix& p, Matrix& l) {
  if (!p.is_square()) return false;
  const std::size_t n = p.rows();
  l = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = p(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (s <= 0.0 || !std::isfinite(s)) return false;
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return true;
}

/// Forward substitution, L lower triangular: solves L y = b column-wise.
inline Matrix forward_subst(const Matrix& l, const Matrix& b) {
  const std::size_t n = l.rows();
  Matrix y(n, b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t i = 0; i < n; ++i) {
      double s = b(i, j);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y(k, j);
      y(i, j) = s / l(i, i);
    }
  return y;
}

}  // namespace ncsched
