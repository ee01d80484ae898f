#pragma once

// Test-only reference computations. Nothing here calls into the Jacobi or
// power-iteration code paths, so these can referee them.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "specbound/specbound.hpp"

namespace oracle {

using specbound::Matrix;

/// Closed-form eigenvalues of [[a, b], [b, c]], ascending.
inline std::array<double, 2> sym2_eigenvalues(double a, double b, double c) {
  const double mean = 0.5 * (a + c);
  const double radius = std::hypot(0.5 * (a - c), b);
  return {mean - radius, mean + radius};
}

/// Trigonometric closed form for a symmetric 3x3 matrix, ascending.
inline std::array<double, 3> sym3_eigenvalues(const Matrix& m) {
  const double p1 = m(0, 1) * m(0, 1) + m(0, 2) * m(0, 2) + m(1, 2) * m(1, 2);
  const double q = (m(0, 0) + m(1, 1) + m(2, 2)) / 3.0;
  if (p1 == 0.0) {
    std::array<double, 3> d{m(0, 0), m(1, 1), m(2, 2)};
    std::sort(d.begin(), d.end());
    return d;
  }
  const double p2 = (m(0, 0) - q) * (m(0, 0) - q) + (m(1, 1) - q) * (m(1, 1) - q) +
                    (m(2, 2) - q) * (m(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  double b[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b[i][j] = (m(i, j) - (i == j ? q : 0.0)) / p;
  const double det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                     b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                     b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  const double r = std::clamp(det / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double e2 = 3.0 * q - e1 - e3;
  std::array<double, 3> out{e1, e2, e3};
  std::sort(out.begin(), out.end());
  return out;
}

/// Largest real root of the characteristic polynomial of a nonnegative 3x3
/// matrix, by bisection on [0, max row sum]. For nonnegative input this is
/// the Perron root.
inline double perron_root_3x3(const Matrix& a) {
  const double tr = a(0, 0) + a(1, 1) + a(2, 2);
  const double minors = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0) +
                        a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  const double det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
                     a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                     a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
  auto p = [&](double x) { return ((x - tr) * x + minors) * x - det; };
  double hi = 0.0;
  for (std::size_t i = 0; i < 3; ++i) hi = std::max(hi, a(i, 0) + a(i, 1) + a(i, 2));
  hi += 1.0;
  // p(x) > 0 for every x above the largest real root; walk down in small
  // steps to bracket it, then bisect.
  double lo = hi;
  const double step = hi / 4096.0;
  while (lo > -step && p(lo) > 0.0) lo -= step;
  double top = lo + step;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + top);
    if (p(mid) > 0.0) top = mid; else lo = mid;
  }
  return 0.5 * (lo + top);
}

/// Frame with orthonormal columns by modified Gram-Schmidt on Gaussian columns.
inline specbound::ColumnFrame random_frame(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> cols;
  while (cols.size() < k) {
    std::vector<double> v(n);
    for (double& x : v) x = normal(rng);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& c : cols) {
        double d = 0.0;
        for (std::size_t r = 0; r < n; ++r) d += c[r] * v[r];
        for (std::size_t r = 0; r < n; ++r) v[r] -= d * c[r];
      }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-8) continue;
    for (double& x : v) x /= norm;
    cols.push_back(std::move(v));
  }
  std::vector<double> data(n * k);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < k; ++c) data[r * k + c] = cols[c][r];
  return specbound::ColumnFrame(n, k, std::move(data));
}

/// Unit-trace psd weight matrix G G' / tr(G G').
inline Matrix random_weight(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> g(n * n);
  for (double& x : g) x = normal(rng);
  Matrix w(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r) s += g[i * n + r] * g[j * n + r];
      w(i, j) = s;
      w(j, i) = s;
    }
  const double t = specbound::trace(w);
  Matrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = w(i, j) / t;
  // Re-mirror so the division cannot break bitwise symmetry.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out(j, i) = out(i, j);
  return out;
}

/// Symmetric matrix with Gaussian entries (both signs).
inline Matrix random_signed_symmetric(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = normal(rng);
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

/// Mixed-density nonnegative test matrix for case `index` of a suite:
/// n cycles through 2..12, density through {0.25, 0.5, 0.8, 1}, symmetric on
/// odd indices.
inline Matrix suite_matrix(std::uint64_t index, bool force_symmetric = false) {
  static constexpr double kDensities[] = {0.25, 0.5, 0.8, 1.0};
  specbound::RandomSpec spec;
  spec.seed = 0x5eedULL * 1000003ULL + index;
  spec.n = 2 + index % 11;
  spec.density = kDensities[(index / 11) % 4];
  spec.scale = (index % 3 == 0) ? 10.0 : 1.0;
  spec.symmetric = force_symmetric || (index % 2 == 1);
  return specbound::generate_random(spec);
}

/// P A P' for the permutation taking i to perm[i].
inline Matrix permute(const Matrix& a, const std::vector<std::size_t>& perm) {
  Matrix out(a.n());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) out(perm[i], perm[j]) = a(i, j);
  return out;
}

inline double rel_gap(double value, double reference) {
  return std::abs(value - reference) / std::max(1.0, std::abs(reference));
}

}  // namespace oracle
