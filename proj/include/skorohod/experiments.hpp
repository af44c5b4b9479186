#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace skorohod {

struct ExperimentConfig {
  std::string name;
  int N = 16;
  int L = 2;
  std::size_t paths = 10000;
  std::uint64_t seed = 1;
  int depth = 4;
  int M = 3;
  double t = 0.25;
  std::size_t samples = 1000;
  int n = 2;
  int workers = 1;
  std::string out;  // empty: stdout
};

const std::vector<std::string>& experiment_names();

// key=value lines; '#' starts a comment. Unknown keys are rejected.
void apply_config_line(ExperimentConfig& config, const std::string& key, const std::string& value);
void load_config(std::istream& in, ExperimentConfig& config);
// Throws ContractViolation with the reason.
void validate(const ExperimentConfig& config);

struct ExperimentResult {
  std::string csv;
  bool passed = true;
  std::vector<std::string> failures;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Column layout of each experiment, for --help.
std::string experiment_help();

}  // namespace skorohod
