#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rrie/config.hpp"
#include "rrie/rie.hpp"
#include "rrie/rng.hpp"

namespace rrie {

struct TrialRow {
  Estimator estimator = Estimator::Rie;
  double lambda = 0.0;
  Index trial = 0;
  double mse = 0.0;
  double normalized_mse = 0.0;
  SeedRecord seed;
  double runtime_ms = 0.0;
  bool ok = true;
  std::string error;  // set when !ok
};

struct Aggregate {
  Estimator estimator = Estimator::Rie;
  double lambda = 0.0;
  double mean_mse = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(count)
  double mean_normalized_mse = 0.0;
  Index count = 0;         // successful trials
};

struct ExperimentResult {
  ExperimentConfig config;
  /// Ordered by (lambda index, trial, estimator order in the config).
  std::vector<TrialRow> rows;
  /// Ordered by (estimator order, lambda index).
  std::vector<Aggregate> aggregates;
  Index failed_trials = 0;

  const Aggregate* find(Estimator estimator, double lambda) const;
};

/// Stream index of trial `trial` at lambda index `lambda_index`.
std::uint64_t trial_stream(Index lambda_index, Index trial, Index trials);

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Mean and standard error per (estimator, lambda) over successful rows.
std::vector<Aggregate> aggregate_rows(const std::vector<TrialRow>& rows,
                                      const std::vector<Estimator>& estimators,
                                      const std::vector<double>& lambda_grid);

struct OverlapExperimentResult {
  ExperimentConfig config;
  std::vector<OverlapCurve> empirical;
  /// theory[k][b]: theory at the bin-averaged gamma of trial 0 for curve k.
  std::vector<Vector> theory;
  std::vector<Vector> theory_gamma;
};

/// Overlap experiment at lambda_grid.front() with a fixed signal. Theory is
/// evaluated on the spectrum of trial 0, so it does not depend on `trials`.
OverlapExperimentResult run_overlap_experiment(const ExperimentConfig& config);

/// `sigma_index,sigma,bin,gamma,overlap,stderr,theory_gamma,theory`.
void write_overlap_experiment_csv(std::ostream& out, const OverlapExperimentResult& result);

/// Aggregate table with header `estimator,lambda,mean_mse,stderr,n,m,trials`.
void write_aggregate_csv(std::ostream& out, const ExperimentResult& result);
std::vector<Aggregate> read_aggregate_csv(std::istream& in);

void write_rows_csv(std::ostream& out, const ExperimentResult& result);

enum class PlotFormat { Csv, CsvAndDat };

/// Writes <base>_aggregate.csv and <base>_rows.csv, plus <base>.dat with one
/// whitespace-separated block per estimator (gnuplot `index`) for CsvAndDat.
/// Returns the written paths.
std::vector<std::filesystem::path> emit_plot_data(const ExperimentResult& result,
                                                  const std::filesystem::path& base,
                                                  PlotFormat format = PlotFormat::Csv);

}  // namespace rrie
