#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "specbound/eigen.hpp"
#include "specbound/error.hpp"
#include "specbound/matrix.hpp"

namespace specbound {

/// Dense rows x cols matrix used as the isometry of a compression map.
class ColumnFrame {
 public:
  ColumnFrame() = default;
  ColumnFrame(std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) throw Error(ErrorCode::DimensionMismatch, "frame entry count");
  }

  /// First k columns of the n x n identity.
  static ColumnFrame leading_identity(std::size_t n, std::size_t k) {
    ColumnFrame f(n, k, std::vector<double>(n * k, 0.0));
    for (std::size_t c = 0; c < std::min(n, k); ++c) f.data_[c * k + c] = 1.0;
    return f;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  std::span<const double> entries() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// The closed family of positive unital maps. Indices are zero-based; labels
// printed for users are one-based.

/// phi(X) = (1/n) * sum_ij x_ij
struct UniformEntryAverage {};
/// phi(X) = x_kk
struct CoordinateDiag {
  std::size_t k = 0;
};
/// phi(X) = (x_ii + x_jj) / 2, i != j
struct PairAverage {
  std::size_t i = 0;
  std::size_t j = 1;
};
/// phi(X) = tr X / n
struct NormalizedTrace {};
/// phi(X) = tr(W X) for symmetric psd W with unit trace.
struct TraceForm {
  Matrix w;
  std::string source = "inline";
};
/// Phi(X) = V' X V for V with orthonormal columns.
struct Compression {
  ColumnFrame v;
  std::string source = "inline";
};

using LinMapSpec =
    std::variant<UniformEntryAverage, CoordinateDiag, PairAverage, NormalizedTrace, TraceForm, Compression>;

/// Scalar for functionals, k x k matrix for compressions.
using MapValue = std::variant<double, Matrix>;

inline constexpr double kUnitalTol = 1e-12;
inline constexpr double kFrameOrthonormalTol = 1e-10;
inline constexpr double kFunctionalPositivityTol = 1e-12;
inline constexpr double kCompressionPositivityTol = 1e-10;
/// Matrix variance terms may round slightly negative; anything above
/// -kVarianceClampTol * ||M||_F^2 counts as zero.
inline constexpr double kVarianceClampTol = 1e-10;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

inline bool is_functional(const LinMapSpec& map) noexcept {
  return !std::holds_alternative<Compression>(map);
}

/// Stable user-facing name, matching the --maps syntax.
inline std::string label(const LinMapSpec& map) {
  return std::visit(Overloaded{
                        [](const UniformEntryAverage&) { return std::string("uniform"); },
                        [](const CoordinateDiag& m) { return "diag:" + std::to_string(m.k + 1); },
                        [](const PairAverage& m) {
                          return "pair:" + std::to_string(m.i + 1) + "," + std::to_string(m.j + 1);
                        },
                        [](const NormalizedTrace&) { return std::string("ntrace"); },
                        [](const TraceForm& m) { return "traceform:" + m.source; },
                        [](const Compression& m) { return "compress:" + m.source; },
                    },
                    map);
}

/// Output size of the map: 1 for functionals, k for compressions.
inline std::size_t output_dim(const LinMapSpec& map) noexcept {
  if (const auto* c = std::get_if<Compression>(&map)) return c->v.cols();
  return 1;
}

namespace detail {

inline void require_map_dimension(const LinMapSpec& map, std::size_t n) {
  const auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::DimensionMismatch, label(map) + " on " + std::to_string(n) + "x" +
                                                  std::to_string(n) + ": " + why);
  };
  std::visit(Overloaded{
                 [&](const UniformEntryAverage&) {},
                 [&](const NormalizedTrace&) {},
                 [&](const CoordinateDiag& m) {
                   if (m.k >= n) fail("index out of range");
                 },
                 [&](const PairAverage& m) {
                   if (m.i >= n || m.j >= n) fail("index out of range");
                 },
                 [&](const TraceForm& m) {
                   if (m.w.n() != n) fail("weight matrix has size " + std::to_string(m.w.n()));
                 },
                 [&](const Compression& m) {
                   if (m.v.rows() != n) fail("frame has " + std::to_string(m.v.rows()) + " rows");
                 },
             },
             map);
}

inline Matrix frame_gram(const ColumnFrame& v) {
  Matrix g(v.cols());
  for (std::size_t a = 0; a < v.cols(); ++a)
    for (std::size_t b = 0; b < v.cols(); ++b) {
      double s = 0.0;
      for (std::size_t r = 0; r < v.rows(); ++r) s += v(r, a) * v(r, b);
      g(a, b) = s;
    }
  return g;
}

/// Structural failure of a map, or empty if the map is well formed.
inline std::optional<std::string> structural_problem(const LinMapSpec& map) {
  return std::visit(
      Overloaded{
          [](const UniformEntryAverage&) -> std::optional<std::string> { return std::nullopt; },
          [](const NormalizedTrace&) -> std::optional<std::string> { return std::nullopt; },
          [](const CoordinateDiag&) -> std::optional<std::string> { return std::nullopt; },
          [](const PairAverage& m) -> std::optional<std::string> {
            if (m.i == m.j) return "pair average needs two distinct indices";
            return std::nullopt;
          },
          [](const TraceForm& m) -> std::optional<std::string> {
            if (m.w.empty()) return "empty weight matrix";
            if (!is_symmetric(m.w)) return "weight matrix not symmetric";
            if (std::abs(trace(m.w) - 1.0) > kUnitalTol) return "weight matrix trace is not 1";
            const double lmin = jacobi(m.w, kDefaultEigenTol).values.front();
            if (lmin < -kDefaultEigenTol * std::max(1.0, m.w.frobenius_norm()))
              return "weight matrix not positive semidefinite";
            return std::nullopt;
          },
          [](const Compression& m) -> std::optional<std::string> {
            if (m.v.cols() == 0 || m.v.rows() == 0) return "empty frame";
            if (m.v.cols() > m.v.rows()) return "frame has more columns than rows";
            const Matrix defect = frame_gram(m.v) - Matrix::identity(m.v.cols());
            if (defect.frobenius_norm() > kFrameOrthonormalTol) return "frame columns not orthonormal";
            return std::nullopt;
          },
      },
      map);
}

inline MapValue apply_unchecked(const LinMapSpec& map, const Matrix& m) {
  const std::size_t n = m.n();
  return std::visit(Overloaded{
                        [&](const UniformEntryAverage&) -> MapValue {
                          double s = 0.0;
                          for (double v : m.entries()) s += v;
                          return s / static_cast<double>(n);
                        },
                        [&](const CoordinateDiag& c) -> MapValue { return m(c.k, c.k); },
                        [&](const PairAverage& p) -> MapValue { return 0.5 * (m(p.i, p.i) + m(p.j, p.j)); },
                        [&](const NormalizedTrace&) -> MapValue { return trace(m) / static_cast<double>(n); },
                        [&](const TraceForm& t) -> MapValue {
                          double s = 0.0;
                          for (std::size_t i = 0; i < n; ++i)
                            for (std::size_t j = 0; j < n; ++j) s += t.w(i, j) * m(j, i);
                          return s;
                        },
                        [&](const Compression& c) -> MapValue {
                          const std::size_t k = c.v.cols();
                          std::vector<double> mv(n * k, 0.0);
                          for (std::size_t i = 0; i < n; ++i)
                            for (std::size_t l = 0; l < n; ++l) {
                              const double mil = m(i, l);
                              if (mil == 0.0) continue;
                              for (std::size_t b = 0; b < k; ++b) mv[i * k + b] += mil * c.v(l, b);
                            }
                          Matrix out(k);
                          for (std::size_t a = 0; a < k; ++a)
                            for (std::size_t b = 0; b < k; ++b) {
                              double s = 0.0;
                              for (std::size_t i = 0; i < n; ++i) s += c.v(i, a) * mv[i * k + b];
                              out(a, b) = s;
                            }
                          return out;
                        },
                    },
                    map);
}

}  // namespace detail

/// Throws InvalidMap if the map fails its structural checks (distinct pair
/// indices, unit-trace psd weights, orthonormal frame).
inline void require_valid_map(const LinMapSpec& map) {
  if (auto problem = detail::structural_problem(map)) throw Error(ErrorCode::InvalidMap, label(map) + ": " + *problem);
}

inline MapValue apply_map(const LinMapSpec& map, const Matrix& m) {
  require_valid_map(map);
  detail::require_map_dimension(map, m.n());
  return detail::apply_unchecked(map, m);
}

/// Largest eigenvalue of a map value; the value itself for scalars.
inline double lambda_max_of(const MapValue& value) {
  if (const double* s = std::get_if<double>(&value)) return *s;
  return symmetric_eigenvalues(std::get<Matrix>(value)).max();
}

/// Phi(M^2) - Phi(M)^2 for symmetric M.
struct VarianceTerm {
  /// Clamped at zero; set for functionals only.
  std::optional<double> scalar_value;
  /// Value before clamping (functionals); equals scalar_value when positive.
  double unclamped = 0.0;
  /// Symmetrized variance matrix; set for compressions only.
  std::optional<Matrix> matrix_value;
  /// sqrt(lambda_max) of the variance, the scalar used inside the bounds.
  double sqrt_lambda_max = 0.0;
};

inline VarianceTerm variance(const LinMapSpec& map, const Matrix& m) {
  require_valid_map(map);
  detail::require_map_dimension(map, m.n());
  require_symmetric(m);
  const std::size_t n = m.n();

  VarianceTerm out;
  if (const auto* c = std::get_if<Compression>(&map)) {
    // Unitality makes the variance shift invariant; centering M first keeps
    // the subtraction from cancelling when M is close to a multiple of I.
    const std::size_t k = c->v.cols();
    const double shift = trace(std::get<Matrix>(detail::apply_unchecked(map, m))) / static_cast<double>(k);
    const Matrix centered = m - shift * Matrix::identity(n);
    const Matrix phi = std::get<Matrix>(detail::apply_unchecked(map, centered));
    const Matrix phi_sq = std::get<Matrix>(detail::apply_unchecked(map, matmul(centered, centered)));
    const Matrix raw = phi_sq - matmul(phi, phi);
    Matrix g(k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a; b < k; ++b) {
        const double v = 0.5 * (raw(a, b) + raw(b, a));
        g(a, b) = v;
        g(b, a) = v;
      }
    const auto spectrum = detail::jacobi(g, kDefaultEigenTol);
    const double floor = -kVarianceClampTol * std::max(m.frobenius_norm() * m.frobenius_norm(),
                                                       std::numeric_limits<double>::min());
    if (spectrum.values.front() < floor) {
      throw Error(ErrorCode::NotPSD, "variance matrix eigenvalue " + std::to_string(spectrum.values.front()));
    }
    out.sqrt_lambda_max = std::sqrt(std::max(spectrum.values.back(), 0.0));
    out.matrix_value = std::move(g);
    return out;
  }

  double raw = 0.0;
  if (const auto* d = std::get_if<CoordinateDiag>(&map)) {
    for (std::size_t j = 0; j < n; ++j)
      if (j != d->k) raw += m(d->k, j) * m(d->k, j);
  } else if (const auto* p = std::get_if<PairAverage>(&map)) {
    double rows = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k != p->i) rows += m(k, p->i) * m(k, p->i);
      if (k != p->j) rows += m(k, p->j) * m(k, p->j);
    }
    const double gap = m(p->i, p->i) - m(p->j, p->j);
    raw = 0.5 * rows + 0.25 * gap * gap;
  } else {
    // phi((M - mu I)^2) with mu = phi(M); no cancellation against mu^2.
    const double mu = std::get<double>(detail::apply_unchecked(map, m));
    const Matrix centered = m - mu * Matrix::identity(n);
    raw = std::get<double>(detail::apply_unchecked(map, matmul(centered, centered)));
  }
  out.unclamped = raw;
  out.scalar_value = std::max(raw, 0.0);
  out.sqrt_lambda_max = std::sqrt(*out.scalar_value);
  return out;
}

struct ValidationReport {
  bool passed = true;
  /// Largest deviation seen across the unitality and positivity checks.
  double worst_violation = 0.0;
  std::string message;
};

/// Unitality check plus a seeded battery of random psd inputs. `n` is the
/// dimension to test on; 0 picks the map's own (or smallest admissible) size.
inline ValidationReport validate(const LinMapSpec& map, std::uint64_t seed, std::size_t n = 0) {
  ValidationReport report;
  auto fail = [&](std::string why) {
    if (report.passed) report.message = std::move(why);
    report.passed = false;
  };

  if (n == 0) {
    n = std::visit(Overloaded{
                       [](const UniformEntryAverage&) -> std::size_t { return 3; },
                       [](const NormalizedTrace&) -> std::size_t { return 3; },
                       [](const CoordinateDiag& m) { return std::max<std::size_t>(m.k + 1, 3); },
                       [](const PairAverage& m) { return std::max<std::size_t>({m.i + 1, m.j + 1, 3}); },
                       [](const TraceForm& m) { return m.w.n(); },
                       [](const Compression& m) { return m.v.rows(); },
                   },
                   map);
  }

  if (auto problem = detail::structural_problem(map)) {
    fail(*problem);
    return report;
  }
  try {
    detail::require_map_dimension(map, n);
  } catch (const Error& e) {
    fail(e.what());
    return report;
  }

  const MapValue unit = detail::apply_unchecked(map, Matrix::identity(n));
  if (const double* s = std::get_if<double>(&unit)) {
    const double dev = std::abs(*s - 1.0);
    report.worst_violation = std::max(report.worst_violation, dev);
    if (dev > kUnitalTol) fail("not unital: phi(I) = " + std::to_string(*s));
  } else {
    const Matrix& u = std::get<Matrix>(unit);
    const double dev = (u - Matrix::identity(u.n())).frobenius_norm();
    report.worst_violation = std::max(report.worst_violation, dev);
    if (dev > kFrameOrthonormalTol) fail("not unital: ||Phi(I) - I||_F = " + std::to_string(dev));
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> rank_dist(1, n);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rank = rank_dist(rng);
    std::vector<double> g(n * rank);
    for (double& v : g) v = normal(rng);
    Matrix p(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        double s = 0.0;
        for (std::size_t r = 0; r < rank; ++r) s += g[i * rank + r] * g[j * rank + r];
        p(i, j) = s;
        p(j, i) = s;
      }
    const MapValue value = detail::apply_unchecked(map, p);
    if (const double* s = std::get_if<double>(&value)) {
      report.worst_violation = std::max(report.worst_violation, -*s);
      if (*s < -kFunctionalPositivityTol) fail("negative value on a psd input: " + std::to_string(*s));
    } else {
      const double lmin = detail::jacobi(std::get<Matrix>(value), kDefaultEigenTol).values.front();
      const double scale = kCompressionPositivityTol * p.frobenius_norm();
      report.worst_violation = std::max(report.worst_violation, -lmin);
      if (lmin < -scale) fail("image of a psd input not psd: lambda_min " + std::to_string(lmin));
    }
  }
  if (report.passed) report.message = "ok";
  return report;
}

}  // namespace specbound
