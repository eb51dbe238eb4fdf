#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rrie/ensembles.hpp"

namespace rrie {

enum class Estimator { Rie, Oracle, Identity };

std::string to_string(Estimator e);
Estimator parse_estimator(std::string_view name);

/// Signal prior as written in configs and on the command line:
///   "gaussian" | "sparse:<p>" | "uniform:<lo>:<hi>" (Haar-rotated uniform spectrum)
struct PriorSpec {
  std::string text = "gaussian";

  SignalPrior build() const;
};

/// Noise as written in configs: "gaussian" | "uniform02" | "zero".
struct NoiseSpec {
  std::string text = "gaussian";

  NoiseModel build(double alpha) const;
};

inline const std::vector<double> kDefaultLambdaGrid = {0.1, 0.3, 0.5, 0.7, 0.9, 1, 2, 3, 4, 5};

/// Flat JSON experiment description; unknown keys are rejected.
///
///   {"prior": "sparse:0.2", "noise": "uniform02", "n": 1000, "m": 1000,
///    "lambda_grid": [1, 5], "trials": 10, "master_seed": 7,
///    "estimators": ["rie", "oracle"], "eta_override": null,
///    "output_path": "out/fig3", "fixed_signal": false,
///    "sigma_indices": [250, 500], "rank_bin": 20, "threads": 0}
struct ExperimentConfig {
  PriorSpec prior;
  NoiseSpec noise;
  Index n = 0;
  Index m = 0;
  std::vector<double> lambda_grid = kDefaultLambdaGrid;
  Index trials = 10;
  std::uint64_t master_seed = 0;
  std::vector<Estimator> estimators = {Estimator::Rie, Estimator::Oracle, Estimator::Identity};
  std::optional<double> eta_override;
  std::string output_path;
  bool fixed_signal = false;
  std::vector<Index> sigma_indices;
  Index rank_bin = 1;
  unsigned threads = 0;

  double alpha() const { return static_cast<double>(n) / static_cast<double>(m); }
  /// Throws InvalidArgument describing the first violated constraint.
  void validate() const;
};

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string to_json(const ExperimentConfig& config);

}  // namespace rrie
