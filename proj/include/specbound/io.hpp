#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "specbound/error.hpp"
#include "specbound/linmap.hpp"
#include "specbound/matrix.hpp"

namespace specbound {

/// Rectangular row-major table produced by the text parsers before the
/// square-matrix check.
struct DenseTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

inline std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

inline double parse_double(std::string_view token, ErrorCode code) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(code, "cannot parse number '" + std::string(token) + "'");
  }
  return value;
}

inline std::size_t parse_index(std::string_view token, ErrorCode code) {
  token = trim(token);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(code, "cannot parse integer '" + std::string(token) + "'");
  }
  return value;
}

inline Matrix square_from_table(DenseTable t) {
  if (t.rows != t.cols || t.rows == 0) {
    throw Error(ErrorCode::NonSquare, std::to_string(t.rows) + "x" + std::to_string(t.cols) + " input");
  }
  return Matrix(t.rows, std::move(t.data));
}

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Matrix Market text: `coordinate real general|symmetric` or
/// `array real general`. Symmetric coordinate storage is mirrored.
inline DenseTable parse_matrix_market_table(std::string_view text) {
  const auto lines = detail::split_lines(text);
  std::size_t li = 0;
  if (lines.empty()) throw Error(ErrorCode::BadHeader, "empty input");

  const auto header = detail::split_whitespace(lines[li++]);
  if (header.size() != 5 || detail::lower(header[0]) != "%%matrixmarket" || detail::lower(header[1]) != "matrix") {
    throw Error(ErrorCode::BadHeader, "missing %%MatrixMarket matrix header");
  }
  const std::string layout = detail::lower(header[2]);
  const std::string field = detail::lower(header[3]);
  const std::string symmetry = detail::lower(header[4]);
  const bool coordinate = layout == "coordinate";
  if ((!coordinate && layout != "array") || field != "real" ||
      (symmetry != "general" && !(coordinate && symmetry == "symmetric"))) {
    throw Error(ErrorCode::BadHeader, "unsupported format '" + layout + " " + field + " " + symmetry + "'");
  }
  const bool symmetric = symmetry == "symmetric";

  // Remaining non-comment, non-blank lines.
  std::vector<std::vector<std::string_view>> records;
  for (; li < lines.size(); ++li) {
    const std::string_view line = detail::trim(lines[li]);
    if (line.empty() || line.front() == '%') continue;
    records.push_back(detail::split_whitespace(line));
  }
  if (records.empty()) throw Error(ErrorCode::BadHeader, "missing size line");

  const auto& size = records.front();
  if (size.size() != (coordinate ? 3u : 2u)) throw Error(ErrorCode::BadHeader, "malformed size line");
  DenseTable t;
  t.rows = detail::parse_index(size[0], ErrorCode::BadHeader);
  t.cols = detail::parse_index(size[1], ErrorCode::BadHeader);
  if (t.rows == 0 || t.cols == 0) throw Error(ErrorCode::BadHeader, "zero dimension");
  if (symmetric && t.rows != t.cols) throw Error(ErrorCode::NonSquare, "symmetric storage needs a square matrix");
  t.data.assign(t.rows * t.cols, 0.0);

  if (!coordinate) {
    std::vector<double> values;
    for (std::size_t r = 1; r < records.size(); ++r)
      for (auto token : records[r]) values.push_back(detail::parse_double(token, ErrorCode::BadNumber));
    if (values.size() != t.rows * t.cols) {
      throw Error(ErrorCode::IndexOutOfRange, "array holds " + std::to_string(values.size()) +
                                                  " values, expected " + std::to_string(t.rows * t.cols));
    }
    for (std::size_t c = 0; c < t.cols; ++c)
      for (std::size_t r = 0; r < t.rows; ++r) t.data[r * t.cols + c] = values[c * t.rows + r];
    return t;
  }

  const std::size_t nnz = detail::parse_index(size[2], ErrorCode::BadHeader);
  if (records.size() - 1 != nnz) {
    throw Error(ErrorCode::BadHeader, "header announces " + std::to_string(nnz) + " entries, found " +
                                          std::to_string(records.size() - 1));
  }
  std::vector<bool> seen(t.rows * t.cols, false);
  auto store = [&](std::size_t r, std::size_t c, double v) {
    const std::size_t k = r * t.cols + c;
    if (seen[k]) {
      throw Error(ErrorCode::DuplicateEntry, "entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ")");
    }
    seen[k] = true;
    t.data[k] = v;
  };
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != 3) throw Error(ErrorCode::BadNumber, "coordinate entry needs 'row col value'");
    const std::size_t i = detail::parse_index(rec[0], ErrorCode::BadNumber);
    const std::size_t j = detail::parse_index(rec[1], ErrorCode::BadNumber);
    if (i < 1 || i > t.rows || j < 1 || j > t.cols) {
      throw Error(ErrorCode::IndexOutOfRange, "entry (" + std::string(rec[0]) + "," + std::string(rec[1]) +
                                                  ") outside " + std::to_string(t.rows) + "x" +
                                                  std::to_string(t.cols));
    }
    const double v = detail::parse_double(rec[2], ErrorCode::BadNumber);
    store(i - 1, j - 1, v);
    if (symmetric && i != j) store(j - 1, i - 1, v);
  }
  return t;
}

inline Matrix parse_matrix_market(std::string_view text) {
  return detail::square_from_table(parse_matrix_market_table(text));
}

/// Comma-separated rows; blank lines and lines starting with '#' are skipped.
inline DenseTable parse_csv_table(std::string_view text) {
  DenseTable t;
  for (std::string_view raw : detail::split_lines(text)) {
    const std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
      row.push_back(detail::parse_double(cell, ErrorCode::BadNumber));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (t.rows > 0 && row.size() != t.cols) {
      throw Error(ErrorCode::Ragged, "row " + std::to_string(t.rows + 1) + " has " + std::to_string(row.size()) +
                                         " cells, expected " + std::to_string(t.cols));
    }
    t.cols = row.size();
    ++t.rows;
    t.data.insert(t.data.end(), row.begin(), row.end());
  }
  if (t.rows == 0) throw Error(ErrorCode::NonSquare, "no rows");
  return t;
}

inline Matrix parse_csv(std::string_view text) { return detail::square_from_table(parse_csv_table(text)); }

/// One row per line, 17 significant digits, so parse_csv(render_csv(A)) == A.
inline std::string render_csv(const Matrix& a) {
  std::string out;
  for (std::size_t i = 0; i < a.n(); ++i) {
    for (std::size_t j = 0; j < a.n(); ++j) {
      if (j) out += ',';
      out += detail::format_number(a(i, j));
    }
    out += '\n';
  }
  return out;
}

/// `array real general` layout, column-major, 17 significant digits.
inline std::string render_matrix_market(const Matrix& a) {
  std::string out = "%%MatrixMarket matrix array real general\n";
  out += std::to_string(a.n()) + " " + std::to_string(a.n()) + "\n";
  for (std::size_t j = 0; j < a.n(); ++j)
    for (std::size_t i = 0; i < a.n(); ++i) out += detail::format_number(a(i, j)) + "\n";
  return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

inline bool looks_like_matrix_market(const std::filesystem::path& path, std::string_view text) {
  if (lower(path.extension().string()) == ".mtx") return true;
  if (lower(path.extension().string()) == ".csv") return false;
  return text.substr(0, 14) == "%%MatrixMarket";
}

}  // namespace detail

/// Reads a .mtx or .csv file; other extensions are sniffed by header.
inline DenseTable load_table(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  return detail::looks_like_matrix_market(path, text) ? parse_matrix_market_table(text) : parse_csv_table(text);
}

inline Matrix load_matrix(const std::filesystem::path& path) { return detail::square_from_table(load_table(path)); }

/// Splits a comma list of map specs or bound ids. A bare integer right after
/// a `pair:i` item is the second pair index, so "uniform,pair:1,2" yields
/// {"uniform", "pair:1,2"}.
inline std::vector<std::string> split_spec_list(std::string_view text) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    const std::string_view item = detail::trim(text.substr(start, comma - start));
    const bool bare_index =
        !item.empty() && std::all_of(item.begin(), item.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    if (bare_index && !items.empty()) {
      const std::string& prev = items.back();
      const std::size_t tag = prev.rfind("pair:");
      if (tag != std::string::npos && prev.find(',', tag) == std::string::npos) {
        items.back() += "," + std::string(item);
        start = comma + 1;
        continue;
      }
    }
    if (!item.empty()) items.emplace_back(item);
    start = comma + 1;
  }
  return items;
}

/// Parses `uniform`, `diag:k`, `pair:i,j`, `ntrace`, `traceform:<file>` or
/// `compress:<file>`. Indices are one-based.
inline LinMapSpec parse_map_spec(std::string_view spec) {
  spec = detail::trim(spec);
  const std::size_t colon = spec.find(':');
  const std::string kind = detail::lower(spec.substr(0, colon));
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  const auto bad = [&](const std::string& why) { return Error(ErrorCode::BadSpec, "map '" + std::string(spec) + "': " + why); };
  const auto one_based = [&](std::string_view token) {
    const std::size_t v = detail::parse_index(token, ErrorCode::BadSpec);
    if (v == 0) throw bad("indices are one-based");
    return v - 1;
  };

  if (kind == "uniform" && colon == std::string_view::npos) return UniformEntryAverage{};
  if (kind == "ntrace" && colon == std::string_view::npos) return NormalizedTrace{};
  if (kind == "diag" && !arg.empty()) return CoordinateDiag{one_based(arg)};
  if (kind == "pair" && !arg.empty()) {
    const std::size_t comma = arg.find(',');
    if (comma == std::string_view::npos) throw bad("expected pair:i,j");
    return PairAverage{one_based(arg.substr(0, comma)), one_based(arg.substr(comma + 1))};
  }
  if (kind == "traceform" && !arg.empty()) return TraceForm{load_matrix(std::string(arg)), std::string(arg)};
  if (kind == "compress" && !arg.empty()) {
    DenseTable t = load_table(std::string(arg));
    return Compression{ColumnFrame(t.rows, t.cols, std::move(t.data)), std::string(arg)};
  }
  throw bad("unknown map");
}

/// Parameters of the seeded nonnegative test-matrix generator.
struct RandomSpec {
  std::uint64_t seed = 0;
  std::size_t n = 4;
  double density = 1.0;
  double scale = 1.0;
  bool symmetric = false;
};

/// Deterministic generator. The engine is std::mt19937_64 seeded with
/// spec.seed (its output sequence is fixed by the standard). Entries are
/// visited row-major, only j >= i when symmetric, and each consumes two
/// draws: u = (d1 >> 11) * 2^-53 in [0, 1) decides presence (u < density),
/// m = ((d2 >> 11) + 1) * 2^-53 in (0, 1] gives the magnitude scale * m.
/// Symmetric output mirrors the upper triangle.
inline Matrix generate_random(const RandomSpec& spec) {
  if (spec.n == 0) throw Error(ErrorCode::BadSpec, "n must be positive");
  if (!(spec.density > 0.0 && spec.density <= 1.0)) throw Error(ErrorCode::BadSpec, "density must lie in (0, 1]");
  if (!(spec.scale > 0.0) || !std::isfinite(spec.scale)) throw Error(ErrorCode::BadSpec, "scale must be positive");

  constexpr double kUnit = 1.0 / 9007199254740992.0;  // 2^-53
  std::mt19937_64 engine(spec.seed);
  Matrix a(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = spec.symmetric ? i : 0; j < spec.n; ++j) {
      const double presence = static_cast<double>(engine() >> 11) * kUnit;
      const double magnitude = static_cast<double>((engine() >> 11) + 1) * kUnit;
      const double v = presence < spec.density ? spec.scale * magnitude : 0.0;
      a(i, j) = v;
      if (spec.symmetric) a(j, i) = v;
    }
  }
  return a;
}

}  // namespace specbound
