#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <type_traits>
#include <vector>

#include "qkrein/error.hpp"
#include "qkrein/quaternion.hpp"

namespace qkrein {

/// Dense row-major matrix over a scalar ring T. Zero-sized dimensions are
/// allowed so that the trivial subspace {0} has an n x 0 basis.
template <typename T>
class DenseMatrix {
 public:
  using value_type = T;

  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) throw ContractViolation("matrix entry count does not match shape");
  }
  /// Row-wise literal: {{a, b}, {c, d}}.
  DenseMatrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw ContractViolation("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static DenseMatrix zeros(std::size_t rows, std::size_t cols) { return DenseMatrix(rows, cols); }
  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }
  static DenseMatrix diagonal(const std::vector<T>& d) {
    DenseMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  static DenseMatrix column(const std::vector<T>& v) { return DenseMatrix(v.size(), 1, v); }
  /// Standard basis vector e_{index} of length n.
  static DenseMatrix unit(std::size_t n, std::size_t index) {
    DenseMatrix m(n, 1);
    m(index, 0) = T(1.0);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }
  const std::vector<T>& entries() const { return data_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  /// Vector access for n x 1 matrices.
  T& operator[](std::size_t r) { return data_[r]; }
  const T& operator[](std::size_t r) const { return data_[r]; }

  DenseMatrix col(std::size_t c) const {
    DenseMatrix v(rows_, 1);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }
  void set_col(std::size_t c, const DenseMatrix& v) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
  }
  DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    DenseMatrix b(nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
    return b;
  }
  void set_block(std::size_t r0, std::size_t c0, const DenseMatrix& b) {
    for (std::size_t r = 0; r < b.rows(); ++r)
      for (std::size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
  }

  DenseMatrix& operator+=(const DenseMatrix& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  DenseMatrix& operator-=(const DenseMatrix& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  DenseMatrix& operator*=(double s) {
    for (auto& e : data_) e *= s;
    return *this;
  }

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator-(DenseMatrix a) { return a *= -1.0; }
  friend DenseMatrix operator*(DenseMatrix a, double s) { return a *= s; }
  friend DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw ContractViolation("matrix product shape mismatch");
    DenseMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  /// Right scalar multiplication A q (entrywise a_ij q).
  friend DenseMatrix operator*(DenseMatrix a, const T& s)
    requires(!std::is_same_v<T, double>)
  {
    for (auto& e : a.data_) e = e * s;
    return a;
  }
  /// Left scalar multiplication q A.
  friend DenseMatrix operator*(const T& s, DenseMatrix a)
    requires(!std::is_same_v<T, double>)
  {
    for (auto& e : a.data_) e = s * e;
    return a;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  void check_same_shape(const DenseMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ContractViolation("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using QMatrix = DenseMatrix<Quaternion>;
using ComplexMatrix = DenseMatrix<Complex>;

inline Complex conj(const Complex& c) { return std::conj(c); }

/// Conjugate transpose.
template <typename T>
DenseMatrix<T> adjoint(const DenseMatrix<T>& a) {
  DenseMatrix<T> t(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = conj(a(r, c));
  return t;
}

template <typename T>
double frobenius_norm(const DenseMatrix<T>& a) {
  double s = 0.0;
  using std::norm;
  for (const auto& e : a.entries()) s += norm(e);
  return std::sqrt(s);
}

template <typename T>
double max_abs(const DenseMatrix<T>& a) {
  double m = 0.0;
  using std::abs;
  for (const auto& e : a.entries()) m = std::max(m, abs(e));
  return m;
}

/// Euclidean length of a column vector.
inline double vector_norm(const QMatrix& v) { return frobenius_norm(v); }

inline double vector_norm2(const QMatrix& v) {
  double s = 0.0;
  for (const auto& e : v.entries()) s += norm2(e);
  return s;
}

/// (A + A*) / 2, removing round-off asymmetry from products that are
/// Hermitian in exact arithmetic.
template <typename T>
DenseMatrix<T> hermitian_part(const DenseMatrix<T>& a) {
  if (!a.square()) throw ContractViolation("hermitian_part needs a square matrix");
  return 0.5 * (a + adjoint(a));
}

template <typename T>
DenseMatrix<T> hcat(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.rows() != b.rows()) throw ContractViolation("hcat row mismatch");
  DenseMatrix<T> m(a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

template <typename T>
DenseMatrix<T> vcat(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.cols() != b.cols()) throw ContractViolation("vcat column mismatch");
  DenseMatrix<T> m(a.rows() + b.rows(), a.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

/// Block diagonal diag(a, b).
template <typename T>
DenseMatrix<T> block_diag(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  DenseMatrix<T> m(a.rows() + b.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

/// Largest deviation from Hermitian symmetry, |a_ij - conj(a_ji)|.
template <typename T>
double hermitian_defect(const DenseMatrix<T>& a) {
  double d = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = r; c < a.cols(); ++c) d = std::max(d, abs(a(r, c) - conj(a(c, r))));
  return d;
}

/// Complex adjoint (symplectic image) of a quaternionic matrix. Writing
/// A = A1 + A2 j with complex A1, A2, the image is
///   [[ A1,        A2      ],
///    [ -conj(A2), conj(A1)]]
/// of size 2m x 2n. The map is an injective *-algebra homomorphism.
inline ComplexMatrix embed(const QMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  ComplexMatrix c(2 * m, 2 * n);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t s = 0; s < n; ++s) {
      const auto [a1, a2] = complex_pair(a(r, s));
      c(r, s) = a1;
      c(r, n + s) = a2;
      c(m + r, s) = -std::conj(a2);
      c(m + r, n + s) = std::conj(a1);
    }
  return c;
}

/// Recovers A from its complex adjoint, reading the top block row.
inline QMatrix unembed(const ComplexMatrix& c) {
  if (c.rows() % 2 != 0 || c.cols() % 2 != 0) throw ContractViolation("unembed needs even dimensions");
  const std::size_t m = c.rows() / 2;
  const std::size_t n = c.cols() / 2;
  QMatrix a(m, n);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t s = 0; s < n; ++s) a(r, s) = from_complex_pair(c(r, s), c(r, n + s));
  return a;
}

}  // namespace qkrein
