#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ostd/environments.hpp"
#include "ostd/kernel.hpp"

namespace ostd {

enum class EnvironmentKind { kRandomWalk, kPuddleWorld };
enum class EstimatorKind { kOsGptd, kOsEgptd, kBatchOracle };

std::string to_string(EnvironmentKind kind);
std::string to_string(EstimatorKind kind);

// One experiment = (environment x estimator) over num_trajectories
// independent trajectories. Single-kernel estimators use dictionary[0].
struct ExperimentConfig {
  EnvironmentKind environment = EnvironmentKind::kRandomWalk;
  EstimatorKind estimator = EstimatorKind::kOsGptd;
  std::vector<KernelSpec> dictionary = {
      KernelSpec{KernelFamily::kGaussian, 0.1, 1.0},
      KernelSpec{KernelFamily::kGaussian, 1.0, 1.0},
      KernelSpec{KernelFamily::kGaussian, 10.0, 1.0}};
  int num_features = 100;   // D
  double noise_var = 0.01;  // sigma_n^2
  double gamma = 0.75;
  long num_trajectories = 100;
  long horizon = 1000;
  std::uint64_t master_seed = 1;
  std::string output_dir = "out";
  int workers = 1;
  long oracle_max_transitions = 2000;

  RandomWalkConfig random_walk;
  PuddleWorldConfig puddle_world;

  void validate() const;  // throws ConfigError
};

// Flat key-value text format with [section] headers, '#' comments, and
// typed values. Unknown keys are errors. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

}  // namespace ostd
