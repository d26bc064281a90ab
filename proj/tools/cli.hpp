#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "isosurf/chart.hpp"

namespace isosurf::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kValidation = 1, kNumerical = 2 };

struct RunConfig {
  std::string command;
  std::string chart;
  std::string chart_file;
  std::string chart_b;
  std::string chart_b_file;
  bool all = false;
  /// 0 selects the per-command default.
  int grid = 0;
  std::vector<double> thetas;
  /// Theta samples of the moduli scan.
  int steps = 360;
  double tol_rank = 1e-7;
  double tol_circ = 1e-6;
  double tol_close = 1e-6;
  int jobs = 0;
  std::string out;
  std::string format = "json";
};

nlohmann::json config_json(const RunConfig& config);

/// Parses argv (argv[0] is the program name) and runs the command.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Resolves --chart / --chart-file (or the -b pair).
ChartPtr resolve_chart(const std::string& label, const std::string& file);

/// One row of the invariant battery.
struct CheckRow {
  std::string name;
  bool pass = false;
  double value = 0.0;
  std::string detail;
};

std::vector<CheckRow> check_catalog_entry(const std::string& label, const RunConfig& config);

}  // namespace isosurf::cli
