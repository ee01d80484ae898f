// specbound: eigenvalue bounds for nonnegative matrices, checked against
// the built-in eigensolvers.
//
//   specbound bound  <file>  [--format json|table] [--bounds ids] [--maps specs] [--tol x]
//   specbound verify <file>  (same flags; exit 1 if any bound is violated)
//   specbound batch  <dir>   (verify every .mtx/.csv file in dir)
//   specbound random --seed s --n n --density d --scale c [--symmetric]
//
// Exit codes: 0 success, 1 verification failure, 2 bad input.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specbound/specbound.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;

struct ReportFlags {
  std::string format = "table";
  std::string bounds;
  std::string maps;
  double tol = specbound::kDefaultEigenTol;
};

void add_report_flags(CLI::App& cmd, ReportFlags& flags) {
  cmd.add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"json", "table"}));
  cmd.add_option("--bounds", flags.bounds, "Comma list of bound ids or families (default: all)");
  cmd.add_option("--maps", flags.maps, "Comma list of map specs: uniform, diag:k, pair:i,j, ntrace, "
                                       "traceform:<file>, compress:<file>");
  cmd.add_option("--tol", flags.tol, "Oracle tolerance")->check(CLI::PositiveNumber);
}

specbound::ReportOptions report_options(const ReportFlags& flags, bool verify) {
  specbound::ReportOptions options;
  options.verify = verify;
  options.tol = flags.tol;
  if (!flags.bounds.empty()) options.bounds.selection = specbound::split_spec_list(flags.bounds);
  if (!flags.maps.empty()) {
    std::vector<specbound::LinMapSpec> maps;
    for (const auto& spec : specbound::split_spec_list(flags.maps)) maps.push_back(specbound::parse_map_spec(spec));
    options.bounds.maps = std::move(maps);
  }
  return options;
}

specbound::Report report_for(const fs::path& path, const specbound::ReportOptions& options) {
  return specbound::build_report(path.string(), specbound::load_matrix(path), options);
}

void print(const std::vector<specbound::Report>& reports, const std::string& format, bool as_array) {
  if (format == "json") {
    if (as_array) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& r : reports) arr.push_back(specbound::to_json(r));
      std::cout << arr.dump(2) << "\n";
    } else {
      std::cout << specbound::to_json(reports.front()).dump(2) << "\n";
    }
    return;
  }
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i) std::cout << "\n";
    std::cout << specbound::render_table(reports[i]);
  }
}

int verdict_exit(const std::vector<specbound::Report>& reports) {
  const bool ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.all_hold(); });
  return ok ? kExitOk : kExitViolation;
}

std::vector<fs::path> batch_inputs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw specbound::Error(specbound::ErrorCode::Io, dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".mtx" || ext == ".csv") files.push_back(entry.path());
  }
  return files;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenvalue bounds for nonnegative matrices"};
  app.require_subcommand(1);

  ReportFlags flags;
  std::string input;

  auto* bound = app.add_subcommand("bound", "Compute bounds for one matrix");
  bound->add_option("input", input, "Matrix Market or CSV file")->required();
  add_report_flags(*bound, flags);

  auto* verify = app.add_subcommand("verify", "Compute bounds and check them against the eigen-oracles");
  verify->add_option("input", input, "Matrix Market or CSV file")->required();
  add_report_flags(*verify, flags);

  auto* batch = app.add_subcommand("batch", "Verify every .mtx/.csv file in a directory");
  batch->add_option("dir", input, "Directory of matrices")->required();
  add_report_flags(*batch, flags);

  specbound::RandomSpec spec;
  auto* random = app.add_subcommand("random", "Print a seeded random nonnegative matrix (Matrix Market)");
  random->add_option("--seed", spec.seed, "Generator seed")->envname("SPECBOUND_SEED");
  random->add_option("--n", spec.n, "Dimension");
  random->add_option("--density", spec.density, "Probability an entry is nonzero, in (0,1]");
  random->add_option("--scale", spec.scale, "Largest entry magnitude");
  random->add_flag("--symmetric", spec.symmetric, "Mirror the upper triangle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*random) {
      std::cout << specbound::render_matrix_market(specbound::generate_random(spec));
      return kExitOk;
    }
    if (*bound) {
      print({report_for(input, report_options(flags, false))}, flags.format, false);
      return kExitOk;
    }
    if (*verify) {
      const std::vector<specbound::Report> reports{report_for(input, report_options(flags, true))};
      print(reports, flags.format, false);
      return verdict_exit(reports);
    }
    if (*batch) {
      const auto options = report_options(flags, true);
      std::vector<specbound::Report> reports;
      for (const auto& path : batch_inputs(input)) reports.push_back(report_for(path, options));
      std::sort(reports.begin(), reports.end(),
                [](const auto& l, const auto& r) { return l.matrix_id < r.matrix_id; });
      print(reports, flags.format, true);
      return verdict_exit(reports);
    }
  } catch (const specbound::Error& e) {
    std::cerr << "specbound: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
