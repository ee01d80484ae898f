#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "specbound/error.hpp"

namespace specbound {

/// Relative tolerance used by the symmetry gate unless a caller overrides it.
inline constexpr double kDefaultSymmetryTol = 1e-12;

/// Dense real n x n matrix, row-major, immutable entries after construction
/// apart from explicit element access on non-const instances.
class Matrix {
 public:
  Matrix() = default;

  explicit Matrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  Matrix(std::size_t n, std::vector<double> entries) : n_(n), data_(std::move(entries)) {
    if (data_.size() != n_ * n_) {
      throw Error(ErrorCode::NonSquare, "expected " + std::to_string(n_ * n_) + " entries, got " +
                                            std::to_string(data_.size()));
    }
    for (std::size_t k = 0; k < data_.size(); ++k) {
      if (!std::isfinite(data_[k])) {
        throw Error(ErrorCode::NonFiniteEntry,
                    "entry (" + std::to_string(k / n_ + 1) + "," + std::to_string(k % n_ + 1) + ")");
      }
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix constant(std::size_t n, double value) {
    return Matrix(n, std::vector<double>(n * n, value));
  }

  static Matrix diagonal(std::span<const double> values) {
    Matrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  static Matrix diagonal(std::initializer_list<double> values) {
    return diagonal(std::span<const double>(values.begin(), values.size()));
  }

  std::size_t n() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }

  std::span<const double> entries() const noexcept { return data_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return std::span<const double>(data_).subspan(i * n_, n_);
  }

  std::vector<double> diag() const {
    std::vector<double> d(n_);
    for (std::size_t i = 0; i < n_; ++i) d[i] = (*this)(i, i);
    return d;
  }

  double frobenius_norm() const noexcept {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

  double max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Builds a matrix from nested rows; rejects ragged, non-square or non-finite input.
inline Matrix make_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw Error(ErrorCode::NonSquare, "no rows");
  const std::size_t n = rows.size();
  std::vector<double> flat;
  flat.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw Error(ErrorCode::NonSquare, "row " + std::to_string(i + 1) + " has " +
                                            std::to_string(rows[i].size()) + " entries, expected " +
                                            std::to_string(n));
    }
    flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  }
  return Matrix(n, std::move(flat));
}

inline Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.n() != b.n()) throw Error(ErrorCode::DimensionMismatch, "matrix sum");
  Matrix r(a.n());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.n() != b.n()) throw Error(ErrorCode::DimensionMismatch, "matrix difference");
  Matrix r(a.n());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

inline Matrix operator*(double alpha, const Matrix& a) {
  Matrix r(a.n());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) r(i, j) = alpha * a(i, j);
  return r;
}

/// Exact sign test: every entry >= 0.
inline bool is_nonnegative(const Matrix& a) noexcept {
  return std::all_of(a.entries().begin(), a.entries().end(), [](double v) { return v >= 0.0; });
}

/// |a_ij - a_ji| <= tol * max(1, max |a_kl|) for all i, j.
inline bool is_symmetric(const Matrix& a, double tol = kDefaultSymmetryTol) noexcept {
  const double scale = tol * std::max(1.0, a.max_abs());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = i + 1; j < a.n(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > scale) return false;
  return true;
}

inline void require_nonnegative(const Matrix& a) {
  if (!is_nonnegative(a)) throw Error(ErrorCode::NegativeEntry, "matrix has a negative entry");
}

inline void require_symmetric(const Matrix& a, double tol = kDefaultSymmetryTol) {
  if (!is_symmetric(a, tol)) throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric");
}

/// The symmetric matrix X with x_ij = min(a_ij, a_ji), kept together with the
/// dimension of the matrix it came from.
struct MinSymmetrization {
  Matrix x;
  std::size_t source_dim = 0;
};

inline MinSymmetrization min_symmetrize(const Matrix& a) {
  require_nonnegative(a);
  Matrix x(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) {
    x(i, i) = a(i, i);
    for (std::size_t j = i + 1; j < a.n(); ++j) {
      const double m = std::min(a(i, j), a(j, i));
      x(i, j) = m;
      x(j, i) = m;
    }
  }
  return {std::move(x), a.n()};
}

/// Diagonal entries in nondecreasing order; values[j] is the (j+1)-th smallest.
struct SortedDiagonal {
  std::vector<double> values;

  double operator[](std::size_t j) const { return values[j]; }
  std::size_t size() const noexcept { return values.size(); }
};

inline SortedDiagonal sorted_diagonal(const Matrix& a) {
  std::vector<double> d = a.diag();
  std::stable_sort(d.begin(), d.end());
  return {std::move(d)};
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.n() != b.n()) throw Error(ErrorCode::DimensionMismatch, "matmul operands differ in size");
  const std::size_t n = a.n();
  Matrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.n());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) t(j, i) = a(i, j);
  return t;
}

inline double trace(const Matrix& a) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i) s += a(i, i);
  return s;
}

/// Principal submatrix on a strictly increasing, zero-based index set.
inline Matrix principal_submatrix(const Matrix& a, std::span<const std::size_t> index_set) {
  if (index_set.empty()) throw Error(ErrorCode::BadIndexSet, "empty index set");
  for (std::size_t k = 0; k < index_set.size(); ++k) {
    if (index_set[k] >= a.n()) throw Error(ErrorCode::BadIndexSet, "index out of range");
    if (k > 0 && index_set[k] <= index_set[k - 1])
      throw Error(ErrorCode::BadIndexSet, "index set not strictly increasing");
  }
  Matrix h(index_set.size());
  for (std::size_t r = 0; r < index_set.size(); ++r)
    for (std::size_t c = 0; c < index_set.size(); ++c) h(r, c) = a(index_set[r], index_set[c]);
  return h;
}

inline std::vector<double> row_sums(const Matrix& a) {
  std::vector<double> s(a.n(), 0.0);
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) s[i] += a(i, j);
  return s;
}

inline std::vector<double> col_sums(const Matrix& a) {
  std::vector<double> s(a.n(), 0.0);
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) s[j] += a(i, j);
  return s;
}

}  // namespace specbound
