#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "specbound/error.hpp"
#include "specbound/matrix.hpp"

namespace specbound {

inline constexpr double kDefaultEigenTol = 1e-12;
inline constexpr std::size_t kDefaultMaxIter = 100000;
inline constexpr int kJacobiSweepCap = 100;

/// Eigenvalues in ascending order plus the off-diagonal Frobenius norm left
/// over when the Jacobi sweeps stopped.
struct Spectrum {
  std::vector<double> eigenvalues;
  double residual = 0.0;

  double min() const { return eigenvalues.front(); }
  double max() const { return eigenvalues.back(); }
};

struct PerronEstimate {
  double rho = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

namespace detail {

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column j pairs with values[j]
  double residual = 0.0;
};

inline double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

// Cyclic-by-rows Jacobi on the symmetric part of `a`. Rotation angles follow
// the small-root choice |t| <= 1 so each rotation is well conditioned.
inline EigenDecomposition jacobi(const Matrix& input, double tol) {
  const std::size_t n = input.n();
  Matrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = input(i, i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (input(i, j) + input(j, i));
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  Matrix v = Matrix::identity(n);
  const double target = tol * a.frobenius_norm();

  double off = off_diagonal_norm(a);
  int sweep = 0;
  while (off > target) {
    if (sweep == kJacobiSweepCap) {
      throw Error(ErrorCode::NoConvergence,
                  "Jacobi sweep cap reached, off-diagonal norm " + std::to_string(off));
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          const double np = c * arp - s * arq;
          const double nq = s * arp + c * arq;
          a(r, p) = np;
          a(p, r) = np;
          a(r, q) = nq;
          a(q, r) = nq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
    ++sweep;
    off = off_diagonal_norm(a);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return a(l, l) < a(r, r); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n);
  out.residual = off;
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

}  // namespace detail

/// Full spectrum of a symmetric matrix by cyclic Jacobi. Stops once the
/// off-diagonal Frobenius norm is at most tol * ||A||_F.
inline Spectrum symmetric_eigenvalues(const Matrix& a, double tol = kDefaultEigenTol) {
  require_symmetric(a);
  if (a.empty()) return {};
  auto dec = detail::jacobi(a, tol);
  return {std::move(dec.values), dec.residual};
}

/// k-th smallest eigenvalue, k in 1..n.
inline double eigenvalue_k(const Matrix& a, std::size_t k, double tol = kDefaultEigenTol) {
  require_symmetric(a);
  if (k < 1 || k > a.n()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "k = " + std::to_string(k) + " outside 1.." + std::to_string(a.n()));
  }
  return symmetric_eigenvalues(a, tol).eigenvalues[k - 1];
}

/// Principal square root of a symmetric positive semidefinite matrix.
/// Eigenvalues in [-tol * ||A||_F, 0) are treated as zero.
inline Matrix psd_sqrt(const Matrix& a, double tol = kDefaultEigenTol) {
  require_symmetric(a);
  const std::size_t n = a.n();
  auto dec = detail::jacobi(a, tol);
  const double floor = -tol * a.frobenius_norm();
  std::vector<double> roots(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (dec.values[k] < floor) {
      throw Error(ErrorCode::NotPSD, "eigenvalue " + std::to_string(dec.values[k]));
    }
    roots[k] = std::sqrt(std::max(dec.values[k], 0.0));
  }
  Matrix s(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += dec.vectors(i, k) * roots[k] * dec.vectors(j, k);
      s(i, j) = acc;
      s(j, i) = acc;
    }
  }
  return s;
}

/// Perron root of a nonnegative matrix by power iteration on A + I.
///
/// The shift makes rho(A) + 1 the unique eigenvalue of largest modulus even
/// for periodic A. The iteration matrix is squared after every step, so step
/// k applies (A + I)^(2^k) to the all-ones vector; this keeps convergence
/// geometric when the Perron root is defective (reducible or nilpotent
/// input), where the plain iteration only converges like 1/k. The estimate
/// at each step is the Rayleigh quotient x'Ax / x'x.
inline PerronEstimate spectral_radius(const Matrix& a, double tol = kDefaultEigenTol,
                                      std::size_t max_iter = kDefaultMaxIter) {
  require_nonnegative(a);
  const std::size_t n = a.n();
  if (n == 0) return {0.0, 0, true};

  auto normalize_max = [](Matrix& m) {
    const double s = m.max_abs();
    if (s > 0.0) m = (1.0 / s) * m;
  };
  auto apply = [n](const Matrix& m, const std::vector<double>& x) {
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) y[i] += m(i, j) * x[j];
    return y;
  };

  Matrix shifted = a + Matrix::identity(n);
  normalize_max(shifted);
  std::vector<double> ones(n, 1.0);

  double previous = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t it = 1; it <= max_iter; ++it) {
    std::vector<double> x = apply(shifted, ones);
    const double xnorm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
    for (double& xi : x) xi /= xnorm;
    const std::vector<double> ax = apply(a, x);
    const double estimate = std::inner_product(x.begin(), x.end(), ax.begin(), 0.0);

    if (std::abs(estimate - previous) <= tol * std::max(1.0, std::abs(estimate))) {
      return {std::max(estimate, 0.0), it, true};
    }
    previous = estimate;
    shifted = matmul(shifted, shifted);
    normalize_max(shifted);
  }
  throw Error(ErrorCode::NoConvergence, "power iteration hit " + std::to_string(max_iter) + " steps");
}

}  // namespace specbound
