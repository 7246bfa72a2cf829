#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "config.hpp"
#include "experiments.hpp"
#include "report.hpp"

namespace sc = softphoton::cli;

namespace {

constexpr int kConfigExit = 2;
constexpr int kNumericalExit = 3;

void emit(const sc::Report& r, const std::string& format, const std::string& out_path) {
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) throw sc::ConfigError("out", "cannot write '" + out_path + "'");
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  if (format == "json") {
    sc::write_json(r, out);
  } else {
    sc::write_csv(r, out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft-photon dressing experiments"};
  std::string experiment, config_path, out_path, format = "csv";
  std::vector<std::string> overrides;
  app.add_option("experiment", experiment, "Experiment name")
      ->required()
      ->check(CLI::IsMember(sc::experiment_names()));
  app.add_option("--config", config_path, "key=value file or a JSON report to re-run");
  app.add_option("--set", overrides, "Override, key=value (repeatable, later wins)");
  app.add_option("--out", out_path, "Output file (default stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigExit;
  }

  try {
    sc::Config cfg(experiment);
    if (!config_path.empty()) cfg.load_file(config_path);
    for (const auto& s : overrides) cfg.set_assignment(s);

    const auto problems = cfg.diagnostics();
    if (experiment == "validate") {
      emit(sc::validation_report(cfg, problems), format, out_path);
      return problems.empty() ? 0 : kConfigExit;
    }
    if (!problems.empty()) {
      for (const auto& p : problems) std::cerr << p << "\n";
      return kConfigExit;
    }
    emit(sc::run_experiment(cfg), format, out_path);
  } catch (const sc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const softphoton::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumericalExit;
  }
  return 0;
}
