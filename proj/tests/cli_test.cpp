#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "kgrs/cli.hpp"
#include "kgrs/errors.hpp"
#include "kgrs/io.hpp"

using namespace kgrs;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path("cli_test_tmp") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << content;
}

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream split(line);
    while (std::getline(split, field, ',')) fields.push_back(field);
    rows.push_back(fields);
  }
  return rows;
}

// shrinking cone profile, the worked example used across the command tests
std::string gaussian_construct_config() {
  return R"({
  "command": "construct",
  "n": 2,
  "k": 4.0,
  "lambda": 1.0,
  "beta0": 0.0,
  "B": 1.0,
  "s_end": 2.0,
  "count": 201,
  "closure_mode": "full-collapse",
  "tolerance": 1e-10
})";
}

void write_gaussian_profile(const fs::path& path, double t0 = 0.1, double t1 = 2.1,
                            int count = 201) {
  AnalyticSpec spec;
  spec.H.value = [](double t) { return t; };
  spec.H.deriv = {[](double) { return 1.0; }, [](double) { return 0.0; },
                  [](double) { return 0.0; }};
  spec.F = spec.H;
  spec.f.value = [](double t) { return t * t / 2.0; };
  spec.f.deriv = {[](double t) { return t; }, [](double) { return 1.0; },
                  [](double) { return 0.0; }};
  io::write_profile_csv(path, build_grid(spec, t0, t1, count));
}

}  // namespace

TEST_CASE("construct command emits the quadrature artifacts and passes its gates") {
  const fs::path dir = scratch("construct_ok");
  const fs::path cfg = dir / "config.json";
  const fs::path out = dir / "out";
  write_text(cfg, gaussian_construct_config());

  CHECK(cli::run_files(cli::Command::Construct, cfg, out, "", std::nullopt) == 0);
  CHECK(fs::exists(out / "profile.csv"));
  CHECK(fs::exists(out / "sprofile.csv"));
  CHECK(fs::exists(out / "residuals.csv"));
  CHECK(fs::exists(out / "sprofile_constants.json"));
  CHECK(fs::exists(out / "closure.json"));
  CHECK_FALSE(fs::exists(out / "profiles.svg"));

  const auto rows = read_csv(out / "residuals.csv");
  REQUIRE(rows.size() >= 150);
  CHECK(rows[0] == std::vector<std::string>{"t", "r_normal", "r_fiber", "r_base", "r_kahler",
                                            "r_killing"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 6);
    for (std::size_t col = 1; col < 6; ++col)
      CHECK(std::fabs(std::stod(rows[i][col])) < 1e-10);
  }

  const auto closure = nlohmann::json::parse(read_all(out / "closure.json"));
  CHECK(closure["pass"] == true);
  bool saw_base_constant = false;
  for (const auto& defect : closure["defects"]) {
    CHECK(defect["ok"] == true);
    if (defect["condition"] == "k - 2n") saw_base_constant = true;
  }
  CHECK(saw_base_constant);

  const auto constants = nlohmann::json::parse(read_all(out / "sprofile_constants.json"));
  CHECK(constants["A"].get<double>() == 0.0);
  CHECK(constants["B"].get<double>() == 1.0);
  CHECK(constants["C"].get<double>() == 0.0);
}

TEST_CASE("format list controls which artifacts appear") {
  const fs::path dir = scratch("formats");
  const fs::path cfg = dir / "config.json";
  write_text(cfg, gaussian_construct_config());

  CHECK(cli::run_files(cli::Command::Construct, cfg, dir / "csv_only", "csv", std::nullopt) == 0);
  CHECK(fs::exists(dir / "csv_only" / "profile.csv"));
  CHECK_FALSE(fs::exists(dir / "csv_only" / "closure.json"));

  CHECK(cli::run_files(cli::Command::Construct, cfg, dir / "json_only", "json", std::nullopt) ==
        0);
  CHECK_FALSE(fs::exists(dir / "json_only" / "profile.csv"));
  CHECK(fs::exists(dir / "json_only" / "closure.json"));

  CHECK(cli::run_files(cli::Command::Construct, cfg, dir / "with_svg", "csv,json,svg",
                       std::nullopt) == 0);
  CHECK(fs::exists(dir / "with_svg" / "profiles.svg"));
  CHECK(fs::exists(dir / "with_svg" / "residuals.svg"));

  CHECK(cli::run_files(cli::Command::Construct, cfg, dir / "bogus", "yaml", std::nullopt) == 1);
}

TEST_CASE("failures map onto the exit-code contract") {
  const fs::path dir = scratch("exit_codes");

  // collapsed fiber radius at the start of the range: numerical domain error
  write_text(dir / "bad_beta.json", R"({"n": 2, "k": 4.0, "lambda": 1.0, "beta0": -1.0,
    "B": 1.0, "s_end": 2.0})");
  CHECK(cli::run_files(cli::Command::Construct, dir / "bad_beta.json", dir / "o1", "",
                       std::nullopt) == 2);

  // sound run pushed under an unattainable tolerance: verification failure
  write_text(dir / "tight.json", gaussian_construct_config());
  CHECK(cli::run_files(cli::Command::Construct, dir / "tight.json", dir / "o2", "", 1e-16) == 3);

  // closure gate: the base constant disagrees with the collapse requirement
  write_text(dir / "bad_closure.json", R"({"n": 2, "k": 3.0, "lambda": 1.0, "beta0": 0.0,
    "B": 1.0, "s_end": 2.0, "count": 201, "closure_mode": "full-collapse"})");
  CHECK(cli::run_files(cli::Command::Construct, dir / "bad_closure.json", dir / "o3", "",
                       std::nullopt) == 3);

  write_text(dir / "unknown_key.json", R"({"n": 2, "k": 4.0, "lambda": 1.0, "beta0": 0.0,
    "B": 1.0, "s_end": 2.0, "wavelength": 7})");
  CHECK(cli::run_files(cli::Command::Construct, dir / "unknown_key.json", dir / "o4", "",
                       std::nullopt) == 1);

  write_text(dir / "mismatch.json", R"({"command": "verify", "n": 2, "k": 4.0, "lambda": 1.0,
    "beta0": 0.0, "B": 1.0, "s_end": 2.0})");
  CHECK(cli::run_files(cli::Command::Construct, dir / "mismatch.json", dir / "o5", "",
                       std::nullopt) == 1);

  write_text(dir / "missing_key.json", R"({"n": 2, "k": 4.0, "lambda": 1.0, "beta0": 0.0,
    "B": 1.0})");
  CHECK(cli::run_files(cli::Command::Construct, dir / "missing_key.json", dir / "o6", "",
                       std::nullopt) == 1);

  write_text(dir / "broken.json", "{ not json");
  CHECK(cli::run_files(cli::Command::Construct, dir / "broken.json", dir / "o7", "",
                       std::nullopt) == 1);

  CHECK(cli::run_files(cli::Command::Construct, dir / "does_not_exist.json", dir / "o8", "",
                       std::nullopt) == 1);

  write_text(dir / "neg_tol.json", gaussian_construct_config());
  CHECK(cli::run_files(cli::Command::Construct, dir / "neg_tol.json", dir / "o9", "", -1.0) == 1);

  write_text(dir / "empty_ts.json", R"({"n": 2, "profile_csv": "p.csv", "t_values": []})");
  CHECK(cli::run_files(cli::Command::Levelset, dir / "empty_ts.json", dir / "o10", "",
                       std::nullopt) == 1);
}

TEST_CASE("verify command checks a stored profile against the equations") {
  const fs::path dir = scratch("verify");
  write_gaussian_profile(dir / "profile.csv");
  write_text(dir / "config.json",
             R"({"command": "verify", "n": 2, "k": 4.0, "lambda": 1.0,
                 "profile_csv": "profile.csv"})");

  const fs::path out = dir / "out";
  CHECK(cli::run_files(cli::Command::Verify, dir / "config.json", out, "", std::nullopt) == 0);
  CHECK(fs::exists(out / "residuals.csv"));
  CHECK(fs::exists(out / "curvature.csv"));
  const auto curvature = read_csv(out / "curvature.csv");
  REQUIRE(curvature.size() >= 2);
  CHECK(curvature[0] == std::vector<std::string>{"t", "rc_normal", "rc_fiber", "rc_base",
                                                 "kahler_residual"});

  // a profile violating the equations by sign fails input validation
  std::ostringstream bad;
  bad << "t,H,F,f\n";
  for (int i = 0; i < 20; ++i) {
    const double t = 0.1 + 0.1 * i;
    bad << t << ',' << -t << ',' << t << ',' << 0.5 * t * t << '\n';
  }
  write_text(dir / "negated.csv", bad.str());
  write_text(dir / "neg_config.json",
             R"({"command": "verify", "n": 2, "k": 4.0, "lambda": 1.0,
                 "profile_csv": "negated.csv"})");
  CHECK(cli::run_files(cli::Command::Verify, dir / "neg_config.json", dir / "neg_out", "",
                       std::nullopt) == 1);

  write_text(dir / "missing_profile.json",
             R"({"command": "verify", "n": 2, "k": 4.0, "lambda": 1.0,
                 "profile_csv": "nowhere.csv"})");
  CHECK(cli::run_files(cli::Command::Verify, dir / "missing_profile.json", dir / "m_out", "",
                       std::nullopt) == 1);

  // wrong equation constants on a sound profile: verification failure
  write_text(dir / "wrong_k.json",
             R"({"command": "verify", "n": 2, "k": 7.0, "lambda": 1.0,
                 "profile_csv": "profile.csv"})");
  CHECK(cli::run_files(cli::Command::Verify, dir / "wrong_k.json", dir / "k_out", "",
                       std::nullopt) == 3);
}

TEST_CASE("stored profile parsing is strict") {
  const fs::path dir = scratch("parse");

  std::ostringstream good;
  good << "t,H,F,f\n";
  for (int i = 0; i < 100; ++i) {
    const double t = 0.1 + 0.01 * i;
    good << t << ',' << t << ',' << t << ',' << 0.5 * t * t << '\n';
  }
  write_text(dir / "good.csv", good.str());
  CHECK(io::read_profile_csv(dir / "good.csv").size() == 100);

  write_text(dir / "short_header.csv", "t,H,F\n0.1,0.1,0.1\n");
  CHECK_THROWS_AS(io::read_profile_csv(dir / "short_header.csv"), ValidationError);

  write_text(dir / "dup.csv", "t,H,F,f\n0.1,1,1,0\n0.1,1,1,0\n0.2,1,1,0\n0.3,1,1,0\n0.4,1,1,0\n");
  CHECK_THROWS_AS(io::read_profile_csv(dir / "dup.csv"), ValidationError);

  write_text(dir / "malformed.csv",
             "t,H,F,f\n0.1,1,1,0\n0.2,1,1,0\n0.3,oops,1,0\n0.4,1,1,0\n0.5,1,1,0\n");
  try {
    io::read_profile_csv(dir / "malformed.csv");
    FAIL("expected a parse rejection");
  } catch (const ValidationError& e) {
    const std::string message = e.what();
    CHECK(message.find("oops") != std::string::npos);
    CHECK(message.find("line 4") != std::string::npos);
  }

  write_text(dir / "wide.csv",
             "t,H,F,f\n0.1,1,1,0\n0.2,1,1,0,9\n0.3,1,1,0\n0.4,1,1,0\n0.5,1,1,0\n");
  CHECK_THROWS_AS(io::read_profile_csv(dir / "wide.csv"), ValidationError);

  write_text(dir / "empty.csv", "");
  CHECK_THROWS_AS(io::read_profile_csv(dir / "empty.csv"), ValidationError);

  // CRLF line endings parse identically
  write_text(dir / "crlf.csv", "t,H,F,f\r\n0.1,1,1,0\r\n0.2,1,1,0\r\n0.3,1,1,0\r\n"
                               "0.4,1,1,0\r\n0.5,1,1,0\r\n");
  CHECK(io::read_profile_csv(dir / "crlf.csv").size() == 5);
}

TEST_CASE("sweep command writes one row per lattice cell") {
  const fs::path dir = scratch("sweep");
  write_text(dir / "config.json",
             R"({"command": "sweep", "n": 2, "k_values": [3.0],
                 "lambda_values": [-1.0, 0.0, 1.0], "beta0_values": [1.0],
                 "B": 0.0, "s_end": 0.2, "count": 2001})");
  const fs::path out = dir / "out";
  CHECK(cli::run_files(cli::Command::Sweep, dir / "config.json", out, "", std::nullopt) == 0);

  const auto rows = read_csv(out / "sweep.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"k", "lambda", "beta0", "closure_pass",
                                            "max_residual"});
  int passes = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 5);
    const double lambda = std::stod(rows[i][1]);
    const bool pass = rows[i][3] == "1";
    if (pass) ++passes;
    // the collapse constant closes exactly when k - lambda * beta0 = 2
    CHECK(pass == (lambda == 1.0));
    const double residual = std::stod(rows[i][4]);
    CHECK(std::isfinite(residual));
    CHECK(residual < 1e-4);
  }
  CHECK(passes == 1);

  // a cell whose quadrature fails is recorded as nan, not a run failure
  write_text(dir / "nan_config.json",
             R"({"command": "sweep", "n": 2, "k_values": [3.0], "lambda_values": [1.0],
                 "beta0_values": [1.0, -1.0], "B": 0.0, "s_end": 0.2, "count": 2001})");
  const fs::path nan_out = dir / "nan_out";
  CHECK(cli::run_files(cli::Command::Sweep, dir / "nan_config.json", nan_out, "", std::nullopt) ==
        0);
  const auto nan_rows = read_csv(nan_out / "sweep.csv");
  REQUIRE(nan_rows.size() == 3);
  CHECK(nan_rows[1][3] == "1");
  CHECK(nan_rows[2][3] == "0");
  CHECK(nan_rows[2][4] == "nan");
}

TEST_CASE("models command writes the catalog") {
  const fs::path dir = scratch("models");
  write_text(dir / "config.json", R"({"command": "models"})");
  const fs::path out = dir / "out";
  CHECK(cli::run_files(cli::Command::Models, dir / "config.json", out, "", std::nullopt) == 0);

  const auto catalog = nlohmann::json::parse(read_all(out / "models.json"));
  REQUIRE(catalog.is_array());
  REQUIRE(catalog.size() == 15);
  CHECK(catalog[0]["kind"] == "flat-sasakian");
  CHECK(catalog[0]["n"] == 2);
  CHECK(catalog[0]["expected_phi_sec"].get<double>() == -3.0);
  bool saw_sphere_n3 = false;
  for (const auto& entry : catalog) {
    if (entry["kind"] == "sphere-sasakian" && entry["n"] == 3) {
      saw_sphere_n3 = true;
      CHECK(entry["expected_phi_sec"].get<double>() == 1.0);
      CHECK(entry["classification_case"] == "i");
    }
  }
  CHECK(saw_sphere_n3);

  write_text(dir / "single.json", R"({"command": "models", "n_values": [5]})");
  CHECK(cli::run_files(cli::Command::Models, dir / "single.json", dir / "single_out", "",
                       std::nullopt) == 0);
  const auto single = nlohmann::json::parse(read_all(dir / "single_out" / "models.json"));
  CHECK(single.size() == 5);
}

TEST_CASE("levelset command reports the structure along a stored profile") {
  const fs::path dir = scratch("levelset");
  write_gaussian_profile(dir / "profile.csv");
  write_text(dir / "config.json",
             R"({"command": "levelset", "n": 2, "profile_csv": "profile.csv",
                 "t_values": [0.4, 1.0, 1.9]})");
  const fs::path out = dir / "out";
  CHECK(cli::run_files(cli::Command::Levelset, dir / "config.json", out, "", std::nullopt) == 0);

  const auto report = nlohmann::json::parse(read_all(out / "levelset.json"));
  REQUIRE(report.is_array());
  REQUIRE(report.size() == 3);
  for (const auto& entry : report) {
    CHECK(entry["dim"] == 3);
    CHECK(entry["metric"].size() == 3);
    CHECK(entry["zeta"].size() == 3);
    CHECK(entry["phi"].size() == 9);
    CHECK(entry["residual"]["r_phi2"].get<double>() < 1e-12);
    CHECK(entry["residual"]["r_metric"].get<double>() < 1e-12);
    CHECK(entry["residual"]["r_eta"].get<double>() < 1e-12);
  }
  // zeta is the unit fiber dual: first component 1/H
  CHECK(report[0]["zeta"][0].get<double>() == doctest::Approx(2.5).epsilon(1e-9));

  write_text(dir / "outside.json",
             R"({"command": "levelset", "n": 2, "profile_csv": "profile.csv",
                 "t_values": [9.0]})");
  CHECK(cli::run_files(cli::Command::Levelset, dir / "outside.json", dir / "b_out", "",
                       std::nullopt) == 1);
}

TEST_CASE("identical runs emit identical bytes") {
  const fs::path dir = scratch("determinism");
  write_text(dir / "config.json", gaussian_construct_config());
  const fs::path out1 = dir / "run1";
  const fs::path out2 = dir / "run2";
  REQUIRE(cli::run_files(cli::Command::Construct, dir / "config.json", out1, "csv,json,svg",
                         std::nullopt) == 0);
  REQUIRE(cli::run_files(cli::Command::Construct, dir / "config.json", out2, "csv,json,svg",
                         std::nullopt) == 0);
  for (const char* name : {"profile.csv", "sprofile.csv", "residuals.csv",
                           "sprofile_constants.json", "closure.json", "profiles.svg",
                           "residuals.svg"}) {
    CHECK(read_all(out1 / name) == read_all(out2 / name));
  }
}

TEST_CASE("command names round-trip") {
  for (const char* name : {"construct", "verify", "models", "levelset", "sweep"})
    CHECK(cli::to_string(cli::command_from_string(name)) == name);
  CHECK_THROWS_AS(cli::command_from_string("destroy"), ValidationError);
}
