#pragma once

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "projlab/errors.hpp"
#include "projlab/rational.hpp"

namespace projlab {

/// Dense row-major matrix over an exact scalar type.
template <class T>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    a_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DomainError("ragged matrix initializer");
      for (const auto& x : r) a_.push_back(x);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Matrix transpose() const {
    Matrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DomainError("matrix product dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& f = a(i, k);
        if (f == T(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += f * b(k, j);
      }
    return c;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DomainError("matrix sum dimension mismatch");
    Matrix c = a;
    for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] += b.a_[i];
    return c;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DomainError("matrix difference dimension mismatch");
    Matrix c = a;
    for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] -= b.a_[i];
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

  std::vector<T> col(std::size_t j) const {
    std::vector<T> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<T> a_;
};

using ExactMatrix = Matrix<Rational>;

/// Exact rank over the rationals via fraction-free Bareiss elimination.
inline std::size_t mat_rank(ExactMatrix m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t rank = 0;
  Rational prev(1);
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && m(piv, c).is_zero()) ++piv;
    if (piv == rows) continue;
    if (piv != rank)
      for (std::size_t j = c; j < cols; ++j) std::swap(m(rank, j), m(piv, j));
    const Rational p = m(rank, c);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      const Rational f = m(i, c);
      for (std::size_t j = c; j < cols; ++j)
        m(i, j) = (m(i, j) * p - f * m(rank, j)) / prev;
    }
    prev = p;
    ++rank;
  }
  return rank;
}

/// Solves A X = B exactly for square nonsingular A (Bareiss forward pass,
/// exact back substitution). Throws SingularMatrixError.
inline ExactMatrix mat_solve(const ExactMatrix& a, const ExactMatrix& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DomainError("mat_solve: A must be square");
  if (b.rows() != n) throw DomainError("mat_solve: rhs row count mismatch");
  const std::size_t w = n + b.cols();
  ExactMatrix m(n, w);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) m(i, n + j) = b(i, j);
  }
  Rational prev(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m(piv, k).is_zero()) ++piv;
    if (piv == n) throw SingularMatrixError("mat_solve: singular matrix");
    if (piv != k)
      for (std::size_t j = 0; j < w; ++j) std::swap(m(k, j), m(piv, j));
    const Rational p = m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Rational f = m(i, k);
      for (std::size_t j = k; j < w; ++j)
        m(i, j) = (m(i, j) * p - f * m(k, j)) / prev;
    }
    prev = p;
  }
  ExactMatrix x(n, b.cols());
  for (std::size_t col = 0; col < b.cols(); ++col) {
    for (std::size_t ii = n; ii-- > 0;) {
      Rational s = m(ii, n + col);
      for (std::size_t j = ii + 1; j < n; ++j) s -= m(ii, j) * x(j, col);
      x(ii, col) = s / m(ii, ii);
    }
  }
  return x;
}

inline ExactMatrix mat_inverse(const ExactMatrix& a) {
  return mat_solve(a, ExactMatrix::identity(a.rows()));
}

}  // namespace projlab
