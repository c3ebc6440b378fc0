#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kgrs/soliton.hpp"

namespace kgrs::cli {

enum class Command { Construct, Verify, Models, Levelset, Sweep };

// One run, fully specified: the flat key-value config plus the command-line
// overrides (output directory, formats, tolerance). Every field is consumed
// by exactly one command; load_config rejects keys foreign to the command.
struct RunConfig {
  Command command = Command::Construct;

  int n = 2;
  double k = 0.0;
  double lambda = 0.0;
  int q = 1;

  // construct, quadrature branch (also the solver block reused by sweep)
  std::string branch = "kahler";
  ConstructSpec spec;

  // construct, product branch
  double a_slope = 0.0;
  double H0 = 1.0;
  double c0 = 0.0;
  double c1 = 0.0;
  double t0 = 0.0;
  double t1 = 1.0;
  int hyperbolic_count = 1001;

  // verify, levelset
  std::filesystem::path profile_csv;
  std::vector<double> t_values;

  // sweep lattice
  std::vector<double> k_values;
  std::vector<double> lambda_values;
  std::vector<double> beta0_values;

  // models
  std::vector<int> n_values;

  double tolerance = 1e-5;

  std::filesystem::path out_dir;
  bool emit_csv = true;
  bool emit_json = true;
  bool emit_svg = false;
};

Command command_from_string(const std::string& name);
std::string to_string(Command command);

// Parses the flat JSON config for the given command. Unknown keys, type
// mismatches, and a `command` key disagreeing with the subcommand are all
// rejected.
RunConfig load_config(const std::filesystem::path& config_path, Command command);

// Applies a comma-separated format list ("csv,json,svg"); unknown tokens are
// rejected.
void apply_formats(RunConfig& config, const std::string& formats);

// Executes the command, writing artifacts under config.out_dir. Throws
// ValidationError / NumericalError / VerificationError on failure.
void run(const RunConfig& config);

// Full front-end path: load, override, run, and map errors onto the exit-code
// contract (0 ok, 1 invalid config or input, 2 numerical failure,
// 3 verification failure).
int run_files(Command command, const std::filesystem::path& config_path,
              const std::filesystem::path& out_dir, const std::string& formats,
              std::optional<double> tolerance);

}  // namespace kgrs::cli
