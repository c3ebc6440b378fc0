#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kgrs/cli.hpp"

namespace {

struct SubArgs {
  std::string config;
  std::string out;
  std::string format = "csv,json";
  double tolerance = 0.0;
  bool has_tolerance = false;
};

void attach(CLI::App* sub, SubArgs& args) {
  sub->add_option("--config", args.config, "run configuration file (flat JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--out", args.out, "output directory")->required();
  sub->add_option("--format", args.format, "comma-separated outputs: csv,json,svg");
  sub->add_option("--tolerance", args.tolerance, "override the residual tolerance")
      ->check(CLI::PositiveNumber)
      ->each([&args](const std::string&) { args.has_tolerance = true; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cohomogeneity-one Kaehler Ricci soliton workbench"};
  app.require_subcommand(1);

  const char* names[] = {"construct", "verify", "models", "levelset", "sweep"};
  const char* blurbs[] = {"solve the reduced system and write the profile bundle",
                          "evaluate soliton residuals of a profile CSV",
                          "emit the model-space catalog",
                          "induce level-set structures from a profile CSV",
                          "map closure and residuals over a (k, lambda, beta0) grid"};
  SubArgs args[5];
  for (int i = 0; i < 5; ++i) attach(app.add_subcommand(names[i], blurbs[i]), args[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage problems fold into the invalid-input code; --help stays 0.
    return app.exit(e) == 0 ? 0 : 1;
  }

  for (int i = 0; i < 5; ++i) {
    if (!app.get_subcommand(names[i])->parsed()) continue;
    const SubArgs& a = args[i];
    return kgrs::cli::run_files(kgrs::cli::command_from_string(names[i]), a.config, a.out,
                                a.format,
                                a.has_tolerance ? std::optional<double>(a.tolerance)
                                                : std::nullopt);
  }
  return 1;
}
