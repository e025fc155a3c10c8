#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "halfline/io.hpp"
#include "halfline/potentials.hpp"

namespace halfline {

/// Everything a run depends on. Serializes to a flat `key = value` file;
/// flags given on the command line override keys read from `--config`.
struct RunConfig {
  std::string subcommand;
  std::string family;
  std::string input;
  std::string bc = "robin";
  double sigma0 = 0.0;
  double depth = 4.0;
  double width = 1.0;
  double omega = 1.0;
  double gamma = 1.0;
  std::optional<double> length;
  std::optional<long long> intervals;
  double spacing = 2.5e-3;
  /// Telescope step tolerance.
  double tol = 1e-3;
  /// Relative tolerance of the telescope-vs-report consistency check.
  double consistency_tol = 2e-3;
  std::vector<int> order;
  std::string out;
  bool diagnostics = false;
  /// Enforce V <= 0 on loaded input files.
  bool lt_mode = true;

  int sweep = 0;
  std::uint64_t seed = 1;
  std::pair<double, double> depth_range{2.0, 30.0};
  std::pair<double, double> width_range{0.5, 2.0};
  std::pair<double, double> sigma_range{-2.0, 2.0};
};

/// Sets one key; throws ConfigurationError for unknown keys or bad values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);
RunConfig read_config(const std::filesystem::path& path);
/// Every key in a fixed order, doubles with 17 significant digits.
std::string to_config_text(const RunConfig& config);
Json config_json(const RunConfig& config);

BoundaryCondition boundary_condition(const RunConfig& config);
GridOptions grid_options(const RunConfig& config);
/// The named family, if the config selects one (not an input file).
std::optional<PotentialFamily> make_family(const RunConfig& config);
Problem build_problem(const RunConfig& config);

struct CommandResult {
  Json output;
  /// All requested certificates hold.
  bool ok = true;
};

CommandResult cmd_solve(const RunConfig& config);
CommandResult cmd_commute(const RunConfig& config);
CommandResult cmd_verify(const RunConfig& config);
CommandResult cmd_plotdata(const RunConfig& config);
CommandResult cmd_families(const RunConfig& config);

/// One random square well of a sweep, checked with every report.
struct SweepCase {
  int index = 0;
  double depth = 0;
  double width = 0;
  double sigma0 = 0;
  int redraws = 0;
  std::vector<double> robin_eigenvalues;
  std::vector<double> dirichlet_eigenvalues;
  std::vector<LTReport> reports;
  std::optional<DominanceCertificate> dominance;
  bool weak_order = true;
  std::string error;
  bool ok = false;
};

/// Draws the cases (mt19937_64 seeded with `config.seed`, redrawing wells
/// with an eigenvalue in (-0.01, 0)) and runs them concurrently; results are
/// indexed by case so the aggregate does not depend on scheduling.
std::vector<SweepCase> run_sweep(const RunConfig& config);
Json sweep_summary(const RunConfig& config, const std::vector<SweepCase>& cases);

/// Full command-line entry point; returns the process exit code
/// (0 all certificates hold, 1 a certificate failed, 2 an error was raised).
int run_cli(int argc, char** argv);

}  // namespace halfline
