#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "treksem/scalar.hpp"

namespace treksem {

/// Small dense row-major matrix.
template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, ScalarTraits<S>::zero()) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = ScalarTraits<S>::one();
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  S& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const S& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

namespace detail {

// Index of a usable pivot in column `col` at or below `from`: the first
// nonzero entry in exact mode, the largest magnitude in float mode.
template <class S>
std::optional<std::size_t> pick_pivot(const Matrix<S>& m, std::size_t col, std::size_t from) {
  using T = ScalarTraits<S>;
  std::optional<std::size_t> best;
  for (std::size_t r = from; r < m.rows(); ++r) {
    if (T::is_zero(m(r, col))) continue;
    if constexpr (T::kind == ScalarKind::Exact) {
      return r;
    } else {
      if (!best || T::abs(m(r, col)) > T::abs(m(*best, col))) best = r;
    }
  }
  return best;
}

}  // namespace detail

/// Determinant by Gaussian elimination.
template <class S>
S determinant(Matrix<S> m) {
  using T = ScalarTraits<S>;
  const std::size_t n = m.rows();
  S det = T::one();
  for (std::size_t c = 0; c < n; ++c) {
    auto p = detail::pick_pivot(m, c, c);
    if (!p) return T::zero();
    if (*p != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m(c, k), m(*p, k));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (T::is_zero(m(r, c))) continue;
      S f = m(r, c) / m(c, c);
      for (std::size_t k = c; k < n; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return det;
}

/// Inverse by Gauss-Jordan elimination; nullopt when singular.  In float
/// mode a pivot below `singular_tol` times the largest entry counts as zero.
template <class S>
std::optional<Matrix<S>> inverse(Matrix<S> m, double singular_tol = 1e-12) {
  using T = ScalarTraits<S>;
  const std::size_t n = m.rows();
  Matrix<S> inv = Matrix<S>::identity(n);
  double scale = 0.0;
  if constexpr (T::kind == ScalarKind::Float)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) scale = std::max(scale, T::to_double(T::abs(m(r, c))));
  for (std::size_t c = 0; c < n; ++c) {
    auto p = detail::pick_pivot(m, c, c);
    if (!p) return std::nullopt;
    if constexpr (T::kind == ScalarKind::Float)
      if (T::to_double(T::abs(m(*p, c))) <= singular_tol * scale) return std::nullopt;
    if (*p != c)
      for (std::size_t k = 0; k < n; ++k) {
        std::swap(m(c, k), m(*p, k));
        std::swap(inv(c, k), inv(*p, k));
      }
    S piv = m(c, c);
    for (std::size_t k = 0; k < n; ++k) {
      m(c, k) /= piv;
      inv(c, k) /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || T::is_zero(m(r, c))) continue;
      S f = m(r, c);
      for (std::size_t k = 0; k < n; ++k) {
        m(r, k) -= f * m(c, k);
        inv(r, k) -= f * inv(c, k);
      }
    }
  }
  return inv;
}

/// Index (1-based size) of the first leading principal minor that is not
/// strictly positive, or nullopt when all are positive.  Elimination without
/// row exchanges: the k-th pivot is the ratio of consecutive leading minors.
template <class S>
std::optional<std::size_t> first_nonpositive_leading_minor(Matrix<S> a) {
  using T = ScalarTraits<S>;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    if (T::sign(a(k, k)) <= 0) return k + 1;
    for (std::size_t r = k + 1; r < n; ++r) {
      if (T::is_zero(a(r, k))) continue;
      S f = a(r, k) / a(k, k);
      for (std::size_t c = k; c < n; ++c) a(r, c) -= f * a(k, c);
    }
  }
  return std::nullopt;
}

/// Cholesky factorisation attempt; returns the step that failed, if any.
inline std::optional<std::size_t> cholesky_failure(const Matrix<double>& m) {
  const std::size_t n = m.rows();
  Matrix<double> l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) return j + 1;
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = m(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  return std::nullopt;
}

/// Exact: leading principal minors.  Float: Cholesky.
template <class S>
std::optional<std::size_t> positive_definite_failure(const Matrix<S>& m) {
  if constexpr (ScalarTraits<S>::kind == ScalarKind::Exact)
    return first_nonpositive_leading_minor(m);
  else
    return cholesky_failure(m);
}

}  // namespace treksem
