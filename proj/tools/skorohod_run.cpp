// Command-line runner: skorohod-run <experiment> [--flag value ...]
#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "skorohod/error.hpp"
#include "skorohod/experiments.hpp"

int main(int argc, char** argv) {
  using namespace skorohod;
  CLI::App app{"Skorohod integral experiment runner"};
  app.footer(experiment_help());

  std::string name, config_path;
  app.add_option("experiment", name, "one of: geometry isometry martingale theorem1 ducnualart reversal stopping")
      ->required();
  app.add_option("--config", config_path, "key=value file; flags override it");

  // Flags are collected first so the config file can be applied underneath them.
  struct Flag {
    const char* key;
    std::string value;
    CLI::Option* option;
  };
  std::vector<Flag> flags = {{"N", "", nullptr},     {"L", "", nullptr},     {"depth", "", nullptr},
                             {"seed", "", nullptr},  {"paths", "", nullptr}, {"workers", "", nullptr},
                             {"out", "", nullptr},   {"M", "", nullptr},     {"t", "", nullptr},
                             {"samples", "", nullptr}, {"n", "", nullptr}};
  for (auto& f : flags) f.option = app.add_option(std::string("--") + f.key, f.value);

  CLI11_PARSE(app, argc, argv);

  ExperimentConfig config;
  ExperimentResult result;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ContractViolation("cannot open config file " + config_path);
      load_config(in, config);
    }
    config.name = name;
    for (const auto& f : flags)
      if (f.option->count()) apply_config_line(config, f.key, f.value);
    result = run_experiment(config);
  } catch (const ContractViolation& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  }

  if (config.out.empty()) {
    std::cout << result.csv;
  } else {
    std::ofstream out(config.out);
    out << result.csv;
    if (!out) {
      std::cerr << "cannot write " << config.out << "\n";
      return 2;
    }
  }
  for (const auto& f : result.failures) std::cerr << "FAILED: " << f << "\n";
  return result.passed ? 0 : 1;
}
