#include "kgrs/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "kgrs/contact.hpp"
#include "kgrs/curvature.hpp"
#include "kgrs/errors.hpp"
#include "kgrs/io.hpp"

namespace kgrs::cli {

namespace {

using nlohmann::ordered_json;

int log_level() {
  const char* raw = std::getenv("KGRS_LOG");
  if (raw == nullptr) return 0;
  const std::string v(raw);
  if (v.empty() || v == "0" || v == "off") return 0;
  if (v == "2" || v == "debug") return 2;
  return 1;
}

void log_info(int level, const std::string& message) {
  if (log_level() >= level) std::cerr << "[kgrs] " << message << '\n';
}

const ordered_json& expect(const ordered_json& j, const std::string& key, const char* type) {
  const auto it = j.find(key);
  if (it == j.end()) throw ValidationError("config is missing required key '" + key + "'");
  (void)type;
  return *it;
}

double get_number(const ordered_json& j, const std::string& key) {
  const auto& v = expect(j, key, "number");
  if (!v.is_number()) throw ValidationError("config key '" + key + "' must be a number");
  return v.get<double>();
}

double get_number_or(const ordered_json& j, const std::string& key, double fallback) {
  return j.contains(key) ? get_number(j, key) : fallback;
}

int get_int(const ordered_json& j, const std::string& key) {
  const auto& v = expect(j, key, "integer");
  if (!v.is_number_integer()) throw ValidationError("config key '" + key + "' must be an integer");
  return v.get<int>();
}

int get_int_or(const ordered_json& j, const std::string& key, int fallback) {
  return j.contains(key) ? get_int(j, key) : fallback;
}

std::string get_string(const ordered_json& j, const std::string& key) {
  const auto& v = expect(j, key, "string");
  if (!v.is_string()) throw ValidationError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> get_number_array(const ordered_json& j, const std::string& key) {
  const auto& v = expect(j, key, "array");
  if (!v.is_array() || v.empty())
    throw ValidationError("config key '" + key + "' must be a non-empty array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number())
      throw ValidationError("config key '" + key + "' must contain only numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> get_int_array(const ordered_json& j, const std::string& key) {
  const auto& v = expect(j, key, "array");
  if (!v.is_array() || v.empty())
    throw ValidationError("config key '" + key + "' must be a non-empty array of integers");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer())
      throw ValidationError("config key '" + key + "' must contain only integers");
    out.push_back(e.get<int>());
  }
  return out;
}

void reject_unknown_keys(const ordered_json& j, const std::set<std::string>& allowed) {
  for (const auto& item : j.items())
    if (allowed.find(item.key()) == allowed.end())
      throw ValidationError("config key '" + item.key() + "' is not recognized for this command");
}

std::filesystem::path resolve_relative(const std::filesystem::path& base,
                                       const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() ? p : base / p;
}

ordered_json parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path.string());
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  return j;
}

void write_json(const std::filesystem::path& path, const ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
}

std::vector<io::PlotSeries> profile_series(const ProfileGrid& grid) {
  return {{"H", grid.H}, {"F", grid.F}, {"f", grid.f}};
}

void emit_profile_svg(const RunConfig& config, const ProfileGrid& grid) {
  if (!config.emit_svg) return;
  io::write_svg_plot(config.out_dir / "profiles.svg", "profiles", grid.t, profile_series(grid));
}

void emit_residual_svg(const RunConfig& config, const std::vector<ResidualRow>& rows) {
  if (!config.emit_svg || rows.size() < 2) return;
  std::vector<double> t;
  std::vector<io::PlotSeries> series(5);
  series[0].label = "r_normal";
  series[1].label = "r_fiber";
  series[2].label = "r_base";
  series[3].label = "r_kahler";
  series[4].label = "r_killing";
  for (const ResidualRow& row : rows) {
    t.push_back(row.t);
    series[0].y.push_back(row.r.r_normal);
    series[1].y.push_back(row.r.r_fiber);
    series[2].y.push_back(row.r.r_base);
    series[3].y.push_back(row.r.r_kahler);
    series[4].y.push_back(row.r.r_killing);
  }
  io::write_svg_plot(config.out_dir / "residuals.svg", "soliton residuals", t, series);
}

void run_construct_kahler(const RunConfig& config) {
  const AnsatzParams params = make_ansatz(config.n, config.k, config.lambda, config.q);
  ConstructSpec spec = config.spec;
  spec.residual_tolerance = config.tolerance;
  log_info(1, "construct: quadrature branch, " + std::to_string(spec.count) + " samples");
  const ConstructResult result = construct(params, spec);
  if (config.emit_csv) {
    io::write_profile_csv(config.out_dir / "profile.csv", result.grid);
    io::write_sprofile_csv(config.out_dir / "sprofile.csv", result.sprofile);
    io::write_residual_csv(config.out_dir / "residuals.csv", result.residuals);
  }
  if (config.emit_json) {
    io::write_sprofile_constants(config.out_dir / "sprofile_constants.json", result.sprofile);
    io::write_closure_json(config.out_dir / "closure.json", result.closure);
  }
  emit_profile_svg(config, result.grid);
  emit_residual_svg(config, result.residuals);
  log_info(1, "construct: max residual " + io::format_double(result.max_residual));
  if (!result.residual_pass)
    throw VerificationError("max interior residual " + io::format_double(result.max_residual) +
                            " exceeds tolerance " + io::format_double(config.tolerance));
  if (!result.closure.pass) throw VerificationError("closure conditions not met; see closure.json");
}

void run_construct_hyperbolic(const RunConfig& config) {
  log_info(1, "construct: product branch");
  const HyperbolicBranch branch = hyperbolic_solve(config.n, config.a_slope, config.H0, config.c0,
                                                   config.c1, config.t0, config.t1,
                                                   config.hyperbolic_count);
  std::vector<ResidualRow> rows;
  double max_residual = 0.0;
  const std::size_t count = branch.grid.size();
  const std::size_t margin = std::max<std::size_t>(3, count / 50);
  for (std::size_t i = margin; i + margin < count; ++i) {
    ResidualRow row;
    row.t = branch.grid.t[i];
    row.r = residual_hyperbolic(branch, config.n, row.t);
    rows.push_back(row);
    // r_killing is genuinely nonzero on this branch whenever lambda != 0;
    // only the equation residuals gate the run.
    for (double v : {row.r.r_normal, row.r.r_fiber, row.r.r_base, row.r.r_kahler})
      max_residual = std::max(max_residual, std::fabs(v));
  }
  if (config.emit_csv) {
    io::write_profile_csv(config.out_dir / "profile.csv", branch.grid);
    io::write_residual_csv(config.out_dir / "residuals.csv", rows);
  }
  if (config.emit_json) {
    ordered_json j;
    j["branch"] = "hyperbolic";
    j["lambda"] = branch.lambda;
    j["a_slope"] = branch.a_slope;
    j["H0"] = branch.H0;
    j["almost_kahler"] = branch.almost_kahler;
    write_json(config.out_dir / "hyperbolic.json", j);
  }
  emit_profile_svg(config, branch.grid);
  emit_residual_svg(config, rows);
  if (max_residual > config.tolerance)
    throw VerificationError("max interior residual " + io::format_double(max_residual) +
                            " exceeds tolerance " + io::format_double(config.tolerance));
}

void run_verify(const RunConfig& config) {
  const AnsatzParams params = make_ansatz(config.n, config.k, config.lambda, config.q);
  const ProfileGrid grid = io::read_profile_csv(config.profile_csv);
  log_info(1, "verify: " + std::to_string(grid.size()) + " samples from " +
                  config.profile_csv.string());
  std::vector<ResidualRow> rows;
  std::vector<io::CurvatureRow> curvature;
  double max_residual = 0.0;
  const std::size_t count = grid.size();
  const std::size_t margin = std::max<std::size_t>(3, count / 50);
  for (std::size_t i = margin; i + margin < count; ++i) {
    const double t = grid.t[i];
    ResidualRow row;
    row.t = t;
    row.r = residual_full(params, grid, t);
    max_residual = std::max(max_residual, row.r.max_abs());
    rows.push_back(row);
    io::CurvatureRow c;
    c.t = t;
    c.rc = ricci_ansatz(params, grid, t);
    c.kahler_residual = kahler_residual(grid, params.q, t);
    curvature.push_back(c);
  }
  if (config.emit_csv) {
    io::write_residual_csv(config.out_dir / "residuals.csv", rows);
    io::write_curvature_csv(config.out_dir / "curvature.csv", curvature);
  }
  emit_profile_svg(config, grid);
  emit_residual_svg(config, rows);
  log_info(1, "verify: max residual " + io::format_double(max_residual));
  if (max_residual > config.tolerance)
    throw VerificationError("max interior residual " + io::format_double(max_residual) +
                            " exceeds tolerance " + io::format_double(config.tolerance));
}

void run_models(const RunConfig& config) {
  struct Entry {
    ModelKind kind;
    double k;
  };
  const Entry entries[] = {{ModelKind::FlatSasakian, 0.0},
                           {ModelKind::SphereSasakian, 4.0},
                           {ModelKind::HyperbolicSasakian, -3.0},
                           {ModelKind::Product, 0.0},
                           {ModelKind::Hyperbolic, -1.0}};
  ordered_json catalog = ordered_json::array();
  for (int n : config.n_values) {
    for (const Entry& entry : entries) {
      const ModelSpace model = model_space(entry.kind, n, entry.k);
      ordered_json j;
      j["kind"] = to_string(model.kind);
      j["n"] = model.n;
      j["k"] = model.k;
      j["expected_phi_sec"] = model.expected_phi_sec;
      j["classification_case"] = model.classification_case;
      catalog.push_back(j);
    }
  }
  if (config.emit_json) write_json(config.out_dir / "models.json", catalog);
  log_info(1, "models: " + std::to_string(catalog.size()) + " catalog entries");
}

void run_levelset(const RunConfig& config) {
  const ProfileGrid grid = io::read_profile_csv(config.profile_csv);
  ordered_json report = ordered_json::array();
  double worst = 0.0;
  for (double t : config.t_values) {
    const double H = value(grid, ProfileField::H, t);
    const double F = value(grid, ProfileField::F, t);
    const double f_prime = derivative(grid, ProfileField::f, 1, t);
    const FramedOrbit orbit = make_orbit(config.n, H, F);
    const ContactStructure cs = induce_level_set(orbit, H, f_prime);
    const AcmsResidual r = acms_residual(orbit, cs);
    worst = std::max(worst, r.max_abs());
    ordered_json j;
    j["t"] = t;
    j["dim"] = orbit.dim();
    j["metric"] = orbit.metric;
    j["zeta"] = cs.zeta;
    j["eta"] = cs.eta;
    j["phi"] = cs.phi;
    j["residual"] = {{"r_phi2", r.r_phi2}, {"r_metric", r.r_metric}, {"r_eta", r.r_eta}};
    report.push_back(j);
  }
  if (config.emit_json) write_json(config.out_dir / "levelset.json", report);
  log_info(1, "levelset: worst residual " + io::format_double(worst));
  if (worst > config.tolerance)
    throw VerificationError("level-set structure residual " + io::format_double(worst) +
                            " exceeds tolerance " + io::format_double(config.tolerance));
}

struct SweepCell {
  double k = 0.0;
  double lambda = 0.0;
  double beta0 = 0.0;
  bool closure_pass = false;
  double max_residual = std::numeric_limits<double>::quiet_NaN();
};

void evaluate_cell(const RunConfig& config, SweepCell& cell) {
  try {
    const AnsatzParams params = make_ansatz(config.n, cell.k, cell.lambda, config.q);
    const SProfile sp = solve_quadrature(params, cell.beta0, config.spec.B, config.spec.C,
                                         config.spec.init, config.spec.s_end, config.spec.count);
    const ClosureReport report = closure_check(sp, params, ClosureMode::FiberCollapse);
    cell.closure_pass = report.pass;
    const ProfileGrid grid = from_s(sp, params.q, 0.0);
    const std::size_t count = grid.size();
    const std::size_t margin = std::max<std::size_t>(3, count / 50);
    double max_residual = 0.0;
    for (std::size_t i = margin; i + margin < count; ++i)
      max_residual =
          std::max(max_residual, residual_full(params, grid, grid.t[i]).max_abs());
    cell.max_residual = max_residual;
  } catch (const std::exception&) {
    // Cell-level failure (alpha leaving the admissible cone, collapse inside
    // the range) is sweep data, not a run error.
  }
}

void run_sweep(const RunConfig& config) {
  std::vector<SweepCell> cells;
  for (double k : config.k_values)
    for (double lambda : config.lambda_values)
      for (double beta0 : config.beta0_values) {
        SweepCell cell;
        cell.k = k;
        cell.lambda = lambda;
        cell.beta0 = beta0;
        cells.push_back(cell);
      }
  log_info(1, "sweep: " + std::to_string(cells.size()) + " cells");

  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(),
                                                     cells.size()));
  std::vector<std::future<void>> futures;
  for (std::size_t w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&config, &cells, w, workers] {
      for (std::size_t i = w; i < cells.size(); i += workers) evaluate_cell(config, cells[i]);
    }));
  }
  for (auto& f : futures) f.get();

  if (config.emit_csv) {
    std::ofstream out(config.out_dir / "sweep.csv");
    if (!out) throw ValidationError("cannot open for writing: sweep.csv");
    out << "k,lambda,beta0,closure_pass,max_residual\n";
    for (const SweepCell& cell : cells) {
      out << io::format_double(cell.k) << ',' << io::format_double(cell.lambda) << ','
          << io::format_double(cell.beta0) << ',' << (cell.closure_pass ? 1 : 0) << ','
          << io::format_double(cell.max_residual) << '\n';
      log_info(2, "cell k=" + io::format_double(cell.k) +
                      " lambda=" + io::format_double(cell.lambda) +
                      " beta0=" + io::format_double(cell.beta0) +
                      (cell.closure_pass ? " pass" : " fail"));
    }
  }
}

std::set<std::string> allowed_keys(Command command, const std::string& branch) {
  std::set<std::string> keys = {"command", "tolerance", "format"};
  switch (command) {
    case Command::Construct:
      keys.insert("branch");
      if (branch == "hyperbolic") {
        keys.insert({"n", "a_slope", "H0", "c0", "c1", "t0", "t1", "count"});
      } else {
        keys.insert({"n", "k", "lambda", "q", "beta0", "B", "C", "alpha0", "s0", "s_end",
                     "count", "closure_mode"});
      }
      break;
    case Command::Verify:
      keys.insert({"n", "k", "lambda", "q", "profile_csv"});
      break;
    case Command::Models:
      keys.insert("n_values");
      break;
    case Command::Levelset:
      keys.insert({"n", "profile_csv", "t_values"});
      break;
    case Command::Sweep:
      keys.insert({"n", "q", "k_values", "lambda_values", "beta0_values", "B", "C", "alpha0",
                   "s0", "s_end", "count"});
      break;
  }
  return keys;
}

}  // namespace

Command command_from_string(const std::string& name) {
  if (name == "construct") return Command::Construct;
  if (name == "verify") return Command::Verify;
  if (name == "models") return Command::Models;
  if (name == "levelset") return Command::Levelset;
  if (name == "sweep") return Command::Sweep;
  throw ValidationError("unknown command: " + name);
}

std::string to_string(Command command) {
  switch (command) {
    case Command::Construct: return "construct";
    case Command::Verify: return "verify";
    case Command::Models: return "models";
    case Command::Levelset: return "levelset";
    case Command::Sweep: return "sweep";
  }
  return "construct";
}

void apply_formats(RunConfig& config, const std::string& formats) {
  config.emit_csv = false;
  config.emit_json = false;
  config.emit_svg = false;
  std::string token;
  std::istringstream in(formats);
  bool any = false;
  while (std::getline(in, token, ',')) {
    if (token == "csv") {
      config.emit_csv = true;
    } else if (token == "json") {
      config.emit_json = true;
    } else if (token == "svg") {
      config.emit_svg = true;
    } else {
      throw ValidationError("unknown format: '" + token + "'");
    }
    any = true;
  }
  if (!any) throw ValidationError("format list is empty");
}

RunConfig load_config(const std::filesystem::path& config_path, Command command) {
  const ordered_json j = parse_config_file(config_path);
  const std::filesystem::path base = config_path.has_parent_path()
                                         ? config_path.parent_path()
                                         : std::filesystem::path(".");

  RunConfig config;
  config.command = command;
  if (j.contains("command")) {
    const std::string declared = get_string(j, "command");
    if (declared != to_string(command))
      throw ValidationError("config declares command '" + declared + "' but '" +
                            to_string(command) + "' was invoked");
  }

  config.branch = "kahler";
  if (command == Command::Construct && j.contains("branch")) {
    config.branch = get_string(j, "branch");
    if (config.branch != "kahler" && config.branch != "hyperbolic")
      throw ValidationError("branch must be 'kahler' or 'hyperbolic'");
  }
  reject_unknown_keys(j, allowed_keys(command, config.branch));

  double default_tolerance = 1e-5;
  switch (command) {
    case Command::Construct:
      config.n = get_int(j, "n");
      if (config.branch == "hyperbolic") {
        config.a_slope = get_number(j, "a_slope");
        config.H0 = get_number(j, "H0");
        config.c0 = get_number_or(j, "c0", 0.0);
        config.c1 = get_number_or(j, "c1", 0.0);
        config.t0 = get_number_or(j, "t0", 0.0);
        config.t1 = get_number_or(j, "t1", 1.0);
        config.hyperbolic_count = get_int_or(j, "count", 1001);
        default_tolerance = 1e-10;
      } else {
        config.k = get_number(j, "k");
        config.lambda = get_number(j, "lambda");
        config.q = get_int_or(j, "q", 1);
        config.spec.beta0 = get_number(j, "beta0");
        config.spec.B = get_number(j, "B");
        config.spec.C = get_number_or(j, "C", 0.0);
        config.spec.init.s0 = get_number_or(j, "s0", 0.0);
        config.spec.init.alpha0 = get_number_or(j, "alpha0", 0.0);
        config.spec.s_end = get_number(j, "s_end");
        config.spec.count = get_int_or(j, "count", 2001);
        config.spec.closure_mode =
            closure_mode_from_string(j.contains("closure_mode")
                                         ? get_string(j, "closure_mode")
                                         : "none");
      }
      break;
    case Command::Verify:
      config.n = get_int(j, "n");
      config.k = get_number(j, "k");
      config.lambda = get_number(j, "lambda");
      config.q = get_int_or(j, "q", 1);
      config.profile_csv = resolve_relative(base, get_string(j, "profile_csv"));
      break;
    case Command::Models:
      config.n_values = j.contains("n_values") ? get_int_array(j, "n_values")
                                               : std::vector<int>{2, 3, 4};
      break;
    case Command::Levelset:
      config.n = get_int(j, "n");
      config.profile_csv = resolve_relative(base, get_string(j, "profile_csv"));
      config.t_values = get_number_array(j, "t_values");
      default_tolerance = 1e-12;
      break;
    case Command::Sweep:
      config.n = get_int(j, "n");
      config.q = get_int_or(j, "q", 1);
      config.k_values = get_number_array(j, "k_values");
      config.lambda_values = get_number_array(j, "lambda_values");
      config.beta0_values = get_number_array(j, "beta0_values");
      config.spec.B = get_number_or(j, "B", 0.0);
      config.spec.C = get_number_or(j, "C", 0.0);
      config.spec.init.s0 = get_number_or(j, "s0", 0.0);
      config.spec.init.alpha0 = get_number_or(j, "alpha0", 0.0);
      config.spec.s_end = get_number_or(j, "s_end", 0.2);
      config.spec.count = get_int_or(j, "count", 4001);
      break;
  }

  config.tolerance = get_number_or(j, "tolerance", default_tolerance);
  if (!(config.tolerance > 0.0)) throw ValidationError("tolerance must be positive");
  if (j.contains("format")) apply_formats(config, get_string(j, "format"));
  return config;
}

void run(const RunConfig& config) {
  if (config.out_dir.empty()) throw ValidationError("output directory is not set");
  std::filesystem::create_directories(config.out_dir);
  switch (config.command) {
    case Command::Construct:
      if (config.branch == "hyperbolic")
        run_construct_hyperbolic(config);
      else
        run_construct_kahler(config);
      break;
    case Command::Verify:
      run_verify(config);
      break;
    case Command::Models:
      run_models(config);
      break;
    case Command::Levelset:
      run_levelset(config);
      break;
    case Command::Sweep:
      run_sweep(config);
      break;
  }
}

int run_files(Command command, const std::filesystem::path& config_path,
              const std::filesystem::path& out_dir, const std::string& formats,
              std::optional<double> tolerance) {
  try {
    RunConfig config = load_config(config_path, command);
    config.out_dir = out_dir;
    if (!formats.empty()) apply_formats(config, formats);
    if (tolerance) {
      if (!(*tolerance > 0.0)) throw ValidationError("tolerance must be positive");
      config.tolerance = *tolerance;
    }
    run(config);
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "error (invalid input): " << e.what() << '\n';
    return 1;
  } catch (const VerificationError& e) {
    std::cerr << "error (verification): " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "error (numerical): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace kgrs::cli
