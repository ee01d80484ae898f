#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>  // nlohmann/json, vendored

#include "specbound/bounds.hpp"
#include "specbound/eigen.hpp"
#include "specbound/matrix.hpp"

namespace specbound {

/// A lower bound holds iff value <= oracle + kVerdictSlack * max(1, |oracle|);
/// upper bounds mirror this.
inline constexpr double kVerdictSlack = 1e-8;

struct OracleValues {
  std::optional<double> rho;
  std::optional<double> lambda_min;
  std::optional<double> lambda_2;
  /// Ascending; present for symmetric input only.
  std::optional<std::vector<double>> eigenvalues;

  friend bool operator==(const OracleValues&, const OracleValues&) = default;
};

struct Verdict {
  std::string name;
  bool holds = true;
  /// Oracle minus bound for lower bounds, bound minus oracle for upper
  /// bounds; negative means violated.
  double gap = 0.0;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct Report {
  std::string matrix_id;
  std::size_t n = 0;
  bool symmetric = false;
  std::optional<OracleValues> oracle;
  std::vector<BoundResult> bounds;
  std::optional<std::vector<Verdict>> verdicts;

  bool all_hold() const {
    if (!verdicts) return true;
    return std::all_of(verdicts->begin(), verdicts->end(), [](const Verdict& v) { return v.holds; });
  }

  friend bool operator==(const Report&, const Report&) = default;
};

struct ReportOptions {
  BoundOptions bounds;
  /// Tolerance for both eigen-oracles.
  double tol = kDefaultEigenTol;
  bool verify = false;
};

inline OracleValues compute_oracle(const Matrix& a, double tol = kDefaultEigenTol) {
  OracleValues o;
  o.rho = spectral_radius(a, tol).rho;
  if (is_symmetric(a)) {
    o.eigenvalues = symmetric_eigenvalues(a, tol).eigenvalues;
    o.lambda_min = o.eigenvalues->front();
    if (a.n() >= 2) o.lambda_2 = (*o.eigenvalues)[1];
  }
  return o;
}

/// Oracle value for a bound target, or empty when the oracle cannot supply it.
inline std::optional<double> oracle_target(const OracleValues& o, BoundTarget target) {
  switch (target) {
    case BoundTarget::Rho: return o.rho;
    case BoundTarget::LambdaMin: return o.lambda_min;
    case BoundTarget::Lambda2: return o.lambda_2;
    case BoundTarget::Lambda1PlusN:
      if (!o.eigenvalues || o.eigenvalues->empty()) return std::nullopt;
      return o.eigenvalues->front() + o.eigenvalues->back();
    case BoundTarget::MiddleSum: {
      if (!o.eigenvalues || o.eigenvalues->size() < 3) return std::nullopt;
      double s = 0.0;
      for (std::size_t i = 1; i + 1 < o.eigenvalues->size(); ++i) s += (*o.eigenvalues)[i];
      return s;
    }
  }
  return std::nullopt;
}

inline std::optional<Verdict> judge(const BoundResult& b, const OracleValues& o) {
  if (!b.value) return std::nullopt;
  const auto target = oracle_target(o, b.target);
  if (!target) return std::nullopt;
  const double gap = b.kind == BoundKind::Lower ? *target - *b.value : *b.value - *target;
  const double slack = kVerdictSlack * std::max(1.0, std::abs(*target));
  return Verdict{b.name, gap >= -slack, gap};
}

inline Report build_report(std::string matrix_id, const Matrix& a, const ReportOptions& options = {}) {
  Report r;
  r.matrix_id = std::move(matrix_id);
  r.n = a.n();
  r.symmetric = is_symmetric(a);
  r.bounds = all_bounds(a, options.bounds);
  if (options.verify) {
    r.oracle = compute_oracle(a, options.tol);
    std::vector<Verdict> verdicts;
    for (const auto& b : r.bounds)
      if (auto v = judge(b, *r.oracle)) verdicts.push_back(std::move(*v));
    r.verdicts = std::move(verdicts);
  }
  return r;
}

// JSON ------------------------------------------------------------------

namespace detail {

template <class T>
nlohmann::ordered_json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

template <class T>
std::optional<T> optional_from(const nlohmann::ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

inline BoundKind kind_from_string(const std::string& s) {
  if (s == "lower") return BoundKind::Lower;
  if (s == "upper") return BoundKind::Upper;
  throw Error(ErrorCode::BadSpec, "unknown bound kind '" + s + "'");
}

inline BoundTarget target_from_string(const std::string& s) {
  for (BoundTarget t : {BoundTarget::Rho, BoundTarget::LambdaMin, BoundTarget::Lambda2, BoundTarget::Lambda1PlusN,
                        BoundTarget::MiddleSum})
    if (to_string(t) == s) return t;
  throw Error(ErrorCode::BadSpec, "unknown bound target '" + s + "'");
}

}  // namespace detail

/// Fixed schema: matrix_id, n, symmetric, oracle, bounds, verdicts.
/// Doubles go out in nlohmann's shortest round-trip form, so parsing the
/// text back recovers every value bit for bit.
inline nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["matrix_id"] = r.matrix_id;
  j["n"] = r.n;
  j["symmetric"] = r.symmetric;
  if (r.oracle) {
    j["oracle"] = {{"rho", detail::optional_json(r.oracle->rho)},
                   {"lambda_min", detail::optional_json(r.oracle->lambda_min)},
                   {"lambda_2", detail::optional_json(r.oracle->lambda_2)},
                   {"eigenvalues", detail::optional_json(r.oracle->eigenvalues)}};
  } else {
    j["oracle"] = nullptr;
  }
  auto bounds = nlohmann::ordered_json::array();
  for (const auto& b : r.bounds) {
    bounds.push_back({{"name", b.name},
                      {"value", detail::optional_json(b.value)},
                      {"kind", std::string(to_string(b.kind))},
                      {"target", std::string(to_string(b.target))},
                      {"prerequisites_met", b.prerequisites_met},
                      {"detail", b.detail}});
  }
  j["bounds"] = std::move(bounds);
  if (r.verdicts) {
    auto verdicts = nlohmann::ordered_json::array();
    for (const auto& v : *r.verdicts) verdicts.push_back({{"name", v.name}, {"holds", v.holds}, {"gap", v.gap}});
    j["verdicts"] = std::move(verdicts);
  } else {
    j["verdicts"] = nullptr;
  }
  return j;
}

inline Report report_from_json(const nlohmann::ordered_json& j) {
  Report r;
  r.matrix_id = j.at("matrix_id").get<std::string>();
  r.n = j.at("n").get<std::size_t>();
  r.symmetric = j.at("symmetric").get<bool>();
  if (const auto& o = j.at("oracle"); !o.is_null()) {
    OracleValues ov;
    ov.rho = detail::optional_from<double>(o.at("rho"));
    ov.lambda_min = detail::optional_from<double>(o.at("lambda_min"));
    ov.lambda_2 = detail::optional_from<double>(o.at("lambda_2"));
    ov.eigenvalues = detail::optional_from<std::vector<double>>(o.at("eigenvalues"));
    r.oracle = std::move(ov);
  }
  for (const auto& b : j.at("bounds")) {
    r.bounds.push_back({b.at("name").get<std::string>(), detail::optional_from<double>(b.at("value")),
                        detail::kind_from_string(b.at("kind").get<std::string>()),
                        detail::target_from_string(b.at("target").get<std::string>()),
                        b.at("prerequisites_met").get<bool>(), b.at("detail").get<std::string>()});
  }
  if (const auto& v = j.at("verdicts"); !v.is_null()) {
    std::vector<Verdict> verdicts;
    for (const auto& e : v)
      verdicts.push_back({e.at("name").get<std::string>(), e.at("holds").get<bool>(), e.at("gap").get<double>()});
    r.verdicts = std::move(verdicts);
  }
  return r;
}

// Text table ---------------------------------------------------------------

namespace detail {

inline std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace detail

/// Human-readable rendering; layout may change between versions.
inline std::string render_table(const Report& r) {
  std::ostringstream out;
  out << "matrix: " << r.matrix_id << "  (n = " << r.n << (r.symmetric ? ", symmetric" : ", nonsymmetric") << ")\n";
  if (r.oracle) {
    out << "oracle:";
    if (r.oracle->rho) out << " rho = " << detail::fixed(*r.oracle->rho);
    if (r.oracle->lambda_min) out << "  lambda_min = " << detail::fixed(*r.oracle->lambda_min);
    if (r.oracle->lambda_2) out << "  lambda_2 = " << detail::fixed(*r.oracle->lambda_2);
    out << "\n";
  }

  std::size_t name_w = 4;
  for (const auto& b : r.bounds) name_w = std::max(name_w, b.name.size());
  out << detail::pad("bound", name_w + 2) << detail::pad("kind", 7) << detail::pad("target", 17)
      << detail::pad("value", 16);
  if (r.verdicts) out << detail::pad("verdict", 9) << detail::pad("gap", 14);
  out << "detail\n";

  for (const auto& b : r.bounds) {
    out << detail::pad(b.name, name_w + 2) << detail::pad(std::string(to_string(b.kind)), 7)
        << detail::pad(std::string(to_string(b.target)), 17)
        << detail::pad(b.value ? detail::fixed(*b.value) : "n/a", 16);
    if (r.verdicts) {
      const auto it = std::find_if(r.verdicts->begin(), r.verdicts->end(),
                                   [&](const Verdict& v) { return v.name == b.name; });
      if (it != r.verdicts->end()) {
        out << detail::pad(it->holds ? "holds" : "FAILS", 9) << detail::pad(detail::fixed(it->gap), 14);
      } else {
        out << detail::pad("-", 9) << detail::pad("", 14);
      }
    }
    out << b.detail << "\n";
  }
  return out.str();
}

}  // namespace specbound
