#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "specbound/error.hpp"
#include "specbound/linmap.hpp"
#include "specbound/matrix.hpp"

namespace specbound {

enum class BoundKind { Lower, Upper };
enum class BoundTarget { Rho, LambdaMin, Lambda2, Lambda1PlusN, MiddleSum };

constexpr std::string_view to_string(BoundKind kind) noexcept {
  return kind == BoundKind::Lower ? "lower" : "upper";
}

constexpr std::string_view to_string(BoundTarget target) noexcept {
  switch (target) {
    case BoundTarget::Rho: return "rho";
    case BoundTarget::LambdaMin: return "lambda_min";
    case BoundTarget::Lambda2: return "lambda_2";
    case BoundTarget::Lambda1PlusN: return "lambda_1_plus_n";
    case BoundTarget::MiddleSum: return "middle_sum";
  }
  return "rho";
}

/// One evaluated inequality. A bound whose hypotheses fail carries no value.
struct BoundResult {
  std::string name;
  std::optional<double> value;
  BoundKind kind = BoundKind::Lower;
  BoundTarget target = BoundTarget::Rho;
  bool prerequisites_met = false;
  std::string detail;

  friend bool operator==(const BoundResult&, const BoundResult&) = default;
};

// Catalog identifiers. Parametrized families are suffixed with ":<map label>".
namespace bound_id {
inline constexpr std::string_view kRowLower = "eq1.2-lower";
inline constexpr std::string_view kRowUpper = "eq1.2-upper";
inline constexpr std::string_view kColLower = "eq1.3-lower";
inline constexpr std::string_view kColUpper = "eq1.3-upper";
inline constexpr std::string_view kMiddleSum = "eq2.1";
inline constexpr std::string_view kPairSum = "eq2.2";
inline constexpr std::string_view kMapSymmetric = "eq2.5";
inline constexpr std::string_view kMapGeneral = "eq2.10";
inline constexpr std::string_view kMapValue = "eq2.11";
inline constexpr std::string_view kMeanEntries = "eq2.12";
inline constexpr std::string_view kPairEntry = "eq2.13";
inline constexpr std::string_view kRowVariance = "eq2.14";
inline constexpr std::string_view kPairVariance = "eq2.16";
inline constexpr std::string_view kTraceVariance = "eq2.17";
inline constexpr std::string_view kWolkowiczStyanMax = "eq2.18";
inline constexpr std::string_view kSpreadMin = "eq2.21";
inline constexpr std::string_view kOffDiagonalMin = "eq2.22";
inline constexpr std::string_view kWolkowiczStyanMin = "eq2.28";
inline constexpr std::string_view kThirdDiagonal = "cor2.7";
}  // namespace bound_id

/// Families in catalog order; map families expand once per map.
inline const std::vector<std::string_view>& catalog_families() {
  static const std::vector<std::string_view> families = {
      bound_id::kRowLower,      bound_id::kRowUpper,          bound_id::kColLower,
      bound_id::kColUpper,      bound_id::kMiddleSum,         bound_id::kPairSum,
      bound_id::kMapSymmetric,  bound_id::kMapGeneral,        bound_id::kMapValue,
      bound_id::kMeanEntries,   bound_id::kPairEntry,         bound_id::kRowVariance,
      bound_id::kPairVariance,  bound_id::kTraceVariance,     bound_id::kWolkowiczStyanMax,
      bound_id::kSpreadMin,     bound_id::kOffDiagonalMin,    bound_id::kWolkowiczStyanMin,
      bound_id::kThirdDiagonal,
  };
  return families;
}

inline bool is_map_family(std::string_view family) noexcept {
  return family == bound_id::kMapSymmetric || family == bound_id::kMapGeneral ||
         family == bound_id::kMapValue;
}

namespace detail {

inline BoundResult make_bound(std::string_view name, double value, BoundKind kind, BoundTarget target,
                              std::string detail = {}) {
  return {std::string(name), value, kind, target, true, std::move(detail)};
}

inline void require_size(const Matrix& a, std::size_t min_n) {
  if (a.n() < min_n) {
    throw Error(ErrorCode::TooSmall,
                "needs n >= " + std::to_string(min_n) + ", got " + std::to_string(a.n()));
  }
}

inline void require_nonnegative_symmetric(const Matrix& a) {
  require_nonnegative(a);
  require_symmetric(a);
}

/// (b_11 + b_22) / 2 from the two smallest diagonal entries.
inline double half_two_smallest_diagonal(const Matrix& a) {
  const SortedDiagonal d = sorted_diagonal(a);
  return 0.5 * (d[0] + d[1]);
}

/// tr A / n and the eigenvalue variance tr A^2 / n - (tr A / n)^2, evaluated
/// as ||A - mean I||_F^2 / n for symmetric A so nothing cancels.
inline std::pair<double, double> trace_mean_and_variance(const Matrix& a) {
  const double n = static_cast<double>(a.n());
  const double mean = trace(a) / n;
  const double fro = (a - mean * Matrix::identity(a.n())).frobenius_norm();
  return {mean, fro * fro / n};
}

inline std::string pair_text(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace detail

/// Row-sum interval for rho(A).
inline std::pair<BoundResult, BoundResult> row_sum_bounds(const Matrix& a) {
  require_nonnegative(a);
  const auto s = row_sums(a);
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  return {detail::make_bound(bound_id::kRowLower, *lo, BoundKind::Lower, BoundTarget::Rho,
                             "row " + std::to_string(lo - s.begin() + 1)),
          detail::make_bound(bound_id::kRowUpper, *hi, BoundKind::Upper, BoundTarget::Rho,
                             "row " + std::to_string(hi - s.begin() + 1))};
}

/// Column-sum interval for rho(A).
inline std::pair<BoundResult, BoundResult> col_sum_bounds(const Matrix& a) {
  require_nonnegative(a);
  const auto s = col_sums(a);
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  return {detail::make_bound(bound_id::kColLower, *lo, BoundKind::Lower, BoundTarget::Rho,
                             "column " + std::to_string(lo - s.begin() + 1)),
          detail::make_bound(bound_id::kColUpper, *hi, BoundKind::Upper, BoundTarget::Rho,
                             "column " + std::to_string(hi - s.begin() + 1))};
}

/// lambda_2 + ... + lambda_{n-1} <= b_33 + ... + b_nn.
inline BoundResult middle_sum_upper(const Matrix& a) {
  detail::require_nonnegative_symmetric(a);
  detail::require_size(a, 3);
  const SortedDiagonal d = sorted_diagonal(a);
  double s = 0.0;
  for (std::size_t i = 2; i < d.size(); ++i) s += d[i];
  return detail::make_bound(bound_id::kMiddleSum, s, BoundKind::Upper, BoundTarget::MiddleSum);
}

/// lambda_1 + lambda_n >= b_11 + b_22.
inline BoundResult pair_sum_lower(const Matrix& a) {
  detail::require_nonnegative_symmetric(a);
  detail::require_size(a, 2);
  const SortedDiagonal d = sorted_diagonal(a);
  return detail::make_bound(bound_id::kPairSum, d[0] + d[1], BoundKind::Lower, BoundTarget::Lambda1PlusN);
}

/// rho(A) >= (b_11 + b_22)/2 + sqrt(lambda_max(Phi(A^2) - Phi(A)^2)) for
/// symmetric nonnegative A.
inline BoundResult rho_lower_map(const Matrix& a, const LinMapSpec& map) {
  detail::require_nonnegative_symmetric(a);
  detail::require_size(a, 2);
  require_valid_map(map);
  const VarianceTerm var = variance(map, a);
  return detail::make_bound(std::string(bound_id::kMapSymmetric) + ":" + label(map),
                            detail::half_two_smallest_diagonal(a) + var.sqrt_lambda_max, BoundKind::Lower,
                            BoundTarget::Rho);
}

/// The symmetric-map bound applied to the min-symmetrization X of any
/// nonnegative A; rho(A) >= rho(X) by entrywise dominance.
inline BoundResult rho_lower_general(const Matrix& a, const LinMapSpec& map) {
  require_nonnegative(a);
  detail::require_size(a, 2);
  require_valid_map(map);
  const MinSymmetrization sym = min_symmetrize(a);
  BoundResult r = rho_lower_map(sym.x, map);
  r.name = std::string(bound_id::kMapGeneral) + ":" + label(map);
  return r;
}

/// rho(A) >= phi(X), or lambda_max(Phi(X)) for a compression.
inline BoundResult rho_lower_phi_x(const Matrix& a, const LinMapSpec& map) {
  require_nonnegative(a);
  require_valid_map(map);
  const MinSymmetrization sym = min_symmetrize(a);
  return detail::make_bound(std::string(bound_id::kMapValue) + ":" + label(map),
                            lambda_max_of(apply_map(map, sym.x)), BoundKind::Lower, BoundTarget::Rho);
}

inline BoundResult rho_lower_mean_entries(const Matrix& a) {
  BoundResult r = rho_lower_phi_x(a, UniformEntryAverage{});
  r.name = bound_id::kMeanEntries;
  return r;
}

/// max over i < j of (x_ii + x_jj)/2 + x_ij.
inline BoundResult rho_lower_pair(const Matrix& a) {
  require_nonnegative(a);
  detail::require_size(a, 2);
  const Matrix x = min_symmetrize(a).x;
  double best = -1.0;
  std::size_t bi = 0, bj = 1;
  for (std::size_t i = 0; i < x.n(); ++i)
    for (std::size_t j = i + 1; j < x.n(); ++j) {
      const double v = 0.5 * (x(i, i) + x(j, j)) + x(i, j);
      if (v > best) {
        best = v;
        bi = i;
        bj = j;
      }
    }
  return detail::make_bound(bound_id::kPairEntry, best, BoundKind::Lower, BoundTarget::Rho,
                            "pair " + detail::pair_text(bi, bj));
}

/// Best coordinate functional: (b_11 + b_22)/2 + max_k sqrt(sum_{j != k} x_kj^2).
inline BoundResult rho_lower_row_variance(const Matrix& a) {
  require_nonnegative(a);
  detail::require_size(a, 2);
  double best = 0.0;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < a.n(); ++k) {
    const double v = *rho_lower_general(a, CoordinateDiag{k}).value;
    if (k == 0 || v > best) {
      best = v;
      best_k = k;
    }
  }
  return detail::make_bound(bound_id::kRowVariance, best, BoundKind::Lower, BoundTarget::Rho,
                            "row " + std::to_string(best_k + 1));
}

/// Best pair-average functional. The square root is taken of the exact
/// variance of (x_ii + x_jj)/2:
///   (sum_{k != i} x_ki^2 + sum_{k != j} x_kj^2)/2 + (x_ii - x_jj)^2/4.
inline BoundResult rho_lower_pair_variance(const Matrix& a) {
  require_nonnegative(a);
  detail::require_size(a, 2);
  double best = 0.0;
  std::size_t bi = 0, bj = 1;
  bool first = true;
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = i + 1; j < a.n(); ++j) {
      const double v = *rho_lower_general(a, PairAverage{i, j}).value;
      if (first || v > best) {
        best = v;
        bi = i;
        bj = j;
        first = false;
      }
    }
  return detail::make_bound(bound_id::kPairVariance, best, BoundKind::Lower, BoundTarget::Rho,
                            "pair " + detail::pair_text(bi, bj) + "; pair-average variance under the root");
}

/// (b_11 + b_22)/2 + sqrt(tr X^2 / n - (tr X / n)^2).
inline BoundResult rho_lower_trace_variance(const Matrix& a) {
  BoundResult r = rho_lower_general(a, NormalizedTrace{});
  r.name = bound_id::kTraceVariance;
  return r;
}

/// lambda_max >= tr A/n + sqrt(var / (n - 1)) for symmetric A (any sign).
inline BoundResult lambda_max_lower_ws(const Matrix& a) {
  require_symmetric(a);
  detail::require_size(a, 2);
  const auto [mean, var] = detail::trace_mean_and_variance(a);
  const double value = mean + std::sqrt(var) / std::sqrt(static_cast<double>(a.n() - 1));
  return detail::make_bound(bound_id::kWolkowiczStyanMax, value, BoundKind::Lower, BoundTarget::Rho);
}

/// Floor (b - a)^2 / (2n) on the variance of n reals lying in [a, b].
inline double nagy_variance_floor(std::span<const double> xs, double a, double b) {
  if (xs.empty()) throw Error(ErrorCode::RangeViolation, "empty sample");
  if (a > b) throw Error(ErrorCode::RangeViolation, "a > b");
  for (double x : xs)
    if (x < a || x > b) throw Error(ErrorCode::RangeViolation, std::to_string(x) + " outside [a, b]");
  const double w = b - a;
  return w * w / (2.0 * static_cast<double>(xs.size()));
}

/// Spread bound from the variance floor on the spectrum:
/// tr A/n - lambda_min <= lambda_max - lambda_min <= sqrt(2n * var).
inline BoundResult lambda_min_lower_spread(const Matrix& a) {
  require_symmetric(a);
  detail::require_size(a, 1);
  const auto [mean, var] = detail::trace_mean_and_variance(a);
  const double value = mean - std::sqrt(2.0 * static_cast<double>(a.n()) * var);
  return detail::make_bound(bound_id::kSpreadMin, value, BoundKind::Lower, BoundTarget::LambdaMin);
}

/// min a_ii - sqrt(sum over ordered pairs i != j of a_ij^2 / 2).
inline BoundResult lambda_min_lower_nagy(const Matrix& a) {
  detail::require_nonnegative_symmetric(a);
  detail::require_size(a, 2);
  double off = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j)
      if (i != j) off += a(i, j) * a(i, j);
  const double dmin = sorted_diagonal(a)[0];
  return detail::make_bound(bound_id::kOffDiagonalMin, dmin - std::sqrt(0.5 * off), BoundKind::Lower,
                            BoundTarget::LambdaMin);
}

/// lambda_min >= tr A/n - sqrt(n - 1) * sqrt(var) for symmetric A (any sign).
inline BoundResult lambda_min_lower_ws(const Matrix& a) {
  require_symmetric(a);
  detail::require_size(a, 2);
  const auto [mean, var] = detail::trace_mean_and_variance(a);
  const double value = mean - std::sqrt(static_cast<double>(a.n() - 1)) * std::sqrt(var);
  return detail::make_bound(bound_id::kWolkowiczStyanMin, value, BoundKind::Lower, BoundTarget::LambdaMin);
}

/// lambda_2 <= b_33 by interlacing on a 3x3 principal submatrix.
inline BoundResult lambda2_upper_diag(const Matrix& a) {
  detail::require_nonnegative_symmetric(a);
  detail::require_size(a, 3);
  return detail::make_bound(bound_id::kThirdDiagonal, sorted_diagonal(a)[2], BoundKind::Upper,
                            BoundTarget::Lambda2);
}

/// uniform, ntrace, every diag:k and every pair:i,j for an n x n input.
inline std::vector<LinMapSpec> default_maps(std::size_t n) {
  std::vector<LinMapSpec> maps{UniformEntryAverage{}, NormalizedTrace{}};
  for (std::size_t k = 0; k < n; ++k) maps.emplace_back(CoordinateDiag{k});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) maps.emplace_back(PairAverage{i, j});
  return maps;
}

struct BoundOptions {
  /// Maps for the parametrized families; default_maps(n) when empty.
  std::optional<std::vector<LinMapSpec>> maps;
  /// Catalog ids or family names to keep; everything when empty.
  std::vector<std::string> selection;
};

/// True when `id` is a known catalog id or family name.
inline bool is_catalog_selector(std::string_view id) {
  for (std::string_view family : catalog_families()) {
    if (id == family) return true;
    if (is_map_family(family) && id.size() > family.size() && id.substr(0, family.size()) == family &&
        id[family.size()] == ':')
      return true;
  }
  return false;
}

namespace detail {

inline bool selected(const std::vector<std::string>& selection, std::string_view family, std::string_view id) {
  if (selection.empty()) return true;
  return std::any_of(selection.begin(), selection.end(),
                     [&](const std::string& s) { return s == family || s == id; });
}

inline BoundKind family_kind(std::string_view family) {
  return (family == bound_id::kRowUpper || family == bound_id::kColUpper || family == bound_id::kMiddleSum ||
          family == bound_id::kThirdDiagonal)
             ? BoundKind::Upper
             : BoundKind::Lower;
}

inline BoundTarget family_target(std::string_view family) {
  if (family == bound_id::kMiddleSum) return BoundTarget::MiddleSum;
  if (family == bound_id::kPairSum) return BoundTarget::Lambda1PlusN;
  if (family == bound_id::kThirdDiagonal) return BoundTarget::Lambda2;
  if (family == bound_id::kSpreadMin || family == bound_id::kOffDiagonalMin ||
      family == bound_id::kWolkowiczStyanMin)
    return BoundTarget::LambdaMin;
  return BoundTarget::Rho;
}

// Runs one bound; a failed hypothesis turns into prerequisites_met = false.
inline BoundResult guarded(std::string_view family, const std::string& id,
                           const std::function<BoundResult()>& compute) {
  try {
    return compute();
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::NotSymmetric:
      case ErrorCode::TooSmall:
      case ErrorCode::InvalidMap:
      case ErrorCode::DimensionMismatch:
      case ErrorCode::NotPSD:
        return {id, std::nullopt, family_kind(family), family_target(family), false, e.what()};
      default:
        throw;
    }
  }
}

}  // namespace detail

/// Every applicable catalog bound for a nonnegative matrix, in catalog order.
inline std::vector<BoundResult> all_bounds(const Matrix& a, const BoundOptions& options = {}) {
  require_nonnegative(a);
  for (const auto& s : options.selection)
    if (!is_catalog_selector(s)) throw Error(ErrorCode::BadSpec, "unknown bound id '" + s + "'");

  const std::vector<LinMapSpec> maps = options.maps ? *options.maps : default_maps(a.n());
  std::vector<BoundResult> out;

  auto run = [&](std::string_view family, std::function<BoundResult()> compute) {
    const std::string id(family);
    if (!detail::selected(options.selection, family, id)) return;
    out.push_back(detail::guarded(family, id, compute));
  };
  auto run_map = [&](std::string_view family, const std::function<BoundResult(const LinMapSpec&)>& compute) {
    for (const auto& map : maps) {
      const std::string id = std::string(family) + ":" + label(map);
      if (!detail::selected(options.selection, family, id)) continue;
      out.push_back(detail::guarded(family, id, [&] { return compute(map); }));
    }
  };

  const auto rows = row_sum_bounds(a);
  const auto cols = col_sum_bounds(a);
  run(bound_id::kRowLower, [&] { return rows.first; });
  run(bound_id::kRowUpper, [&] { return rows.second; });
  run(bound_id::kColLower, [&] { return cols.first; });
  run(bound_id::kColUpper, [&] { return cols.second; });
  run(bound_id::kMiddleSum, [&] { return middle_sum_upper(a); });
  run(bound_id::kPairSum, [&] { return pair_sum_lower(a); });
  run_map(bound_id::kMapSymmetric, [&](const LinMapSpec& m) { return rho_lower_map(a, m); });
  run_map(bound_id::kMapGeneral, [&](const LinMapSpec& m) { return rho_lower_general(a, m); });
  run_map(bound_id::kMapValue, [&](const LinMapSpec& m) { return rho_lower_phi_x(a, m); });
  run(bound_id::kMeanEntries, [&] { return rho_lower_mean_entries(a); });
  run(bound_id::kPairEntry, [&] { return rho_lower_pair(a); });
  run(bound_id::kRowVariance, [&] { return rho_lower_row_variance(a); });
  run(bound_id::kPairVariance, [&] { return rho_lower_pair_variance(a); });
  run(bound_id::kTraceVariance, [&] { return rho_lower_trace_variance(a); });
  run(bound_id::kWolkowiczStyanMax, [&] { return lambda_max_lower_ws(a); });
  run(bound_id::kSpreadMin, [&] { return lambda_min_lower_spread(a); });
  run(bound_id::kOffDiagonalMin, [&] { return lambda_min_lower_nagy(a); });
  run(bound_id::kWolkowiczStyanMin, [&] { return lambda_min_lower_ws(a); });
  run(bound_id::kThirdDiagonal, [&] { return lambda2_upper_diag(a); });
  return out;
}

}  // namespace specbound
