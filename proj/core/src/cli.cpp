#include "rrie/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rrie/checks.hpp"
#include "rrie/config.hpp"
#include "rrie/csv.hpp"
#include "rrie/error.hpp"
#include "rrie/harness.hpp"
#include "rrie/matrix_io.hpp"
#include "rrie/mmse.hpp"
#include "rrie/rie.hpp"

namespace rrie {

namespace {

struct DenoiseArgs {
  std::string input;
  std::string output;
  double snr = 1.0;
  std::string noise = "gaussian";
  std::optional<double> alpha;
  std::optional<double> eta;
};

struct MmseArgs {
  std::string prior = "gaussian";
  double lambda_max = 5.0;
  int points = 26;
  Index n = 500;
  Index m = 500;
  std::uint64_t seed = 0;
  std::string output;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path);
  return f;
}

int cmd_denoise(const DenoiseArgs& a, std::ostream& out) {
  Matrix y = read_matrix(a.input);
  const bool transposed = y.rows() > y.cols();
  if (transposed) y.transposeInPlace();
  const double alpha = static_cast<double>(y.rows()) / static_cast<double>(y.cols());
  if (a.alpha && std::abs(*a.alpha - alpha) > 1e-9)
    throw InvalidArgument("--alpha " + format_double(*a.alpha) + " does not match the input shape (" +
                          format_double(alpha) + ")");
  const NoiseModel noise = NoiseSpec{a.noise}.build(alpha);
  Matrix est = denoise(y, a.snr, noise, a.eta);
  if (transposed) est.transposeInPlace();
  write_matrix(a.output, est);
  out << "wrote " << est.rows() << "x" << est.cols() << " estimate to " << a.output << '\n';
  return kExitOk;
}

std::string output_base(const ExperimentConfig& c) {
  return c.output_path.empty() ? std::string("rrie_experiment") : c.output_path;
}

int cmd_experiment(const std::string& path, std::ostream& out, std::ostream& err) {
  const auto config = load_config(path);
  const auto result = run_experiment(config);
  if (result.failed_trials > 0)
    err << "warning: " << result.failed_trials << " trial(s) failed and were excluded\n";
  out << "estimator  lambda  mean_mse  stderr  count\n";
  for (const auto& a : result.aggregates)
    out << to_string(a.estimator) << "  " << format_double(a.lambda) << "  "
        << format_double(a.mean_mse) << "  " << format_double(a.std_error) << "  " << a.count << '\n';
  for (const auto& p : emit_plot_data(result, output_base(config), PlotFormat::CsvAndDat))
    out << "wrote " << p.string() << '\n';
  if (result.failed_trials == static_cast<Index>(config.lambda_grid.size()) * config.trials)
    return kExitNumerical;
  return kExitOk;
}

int cmd_overlap(const std::string& path, std::ostream& out) {
  const auto config = load_config(path);
  const auto result = run_overlap_experiment(config);
  std::string file = output_base(config);
  if (file.size() < 4 || file.compare(file.size() - 4, 4, ".csv") != 0) file += "_overlap.csv";
  auto f = open_output(file);
  write_overlap_experiment_csv(f, result);
  if (!f) throw IoError("write failed: " + file);
  out << "wrote " << file << '\n';
  return kExitOk;
}

int cmd_mmse_curve(const MmseArgs& a, std::ostream& out) {
  if (a.points < 2) throw InvalidArgument("--points must be >= 2");
  if (!(a.lambda_max > 0.0)) throw InvalidArgument("--lambda-max must be > 0");
  const SignalPrior prior = PriorSpec{a.prior}.build();
  const auto base = ChannelParams::make(a.n, a.m, 0.0);
  const NoiseModel noise = NoiseModel::gaussian(base.alpha);
  Rng signal_rng(a.seed, 0);
  const Matrix s = sample_signal(prior, base, signal_rng);
  const double m2 = prior.second_moment(base).value_or(s.squaredNorm() / static_cast<double>(a.n));

  std::vector<MmseSample> samples;
  std::vector<bool> divergent;
  for (int k = 0; k < a.points; ++k) {
    const double lambda = a.lambda_max * k / (a.points - 1);
    if (k == 0) {
      samples.push_back({0.0, m2});
      divergent.push_back(false);
      continue;
    }
    const auto params = ChannelParams::make(a.n, a.m, lambda);
    Rng rng(a.seed, static_cast<std::uint64_t>(k));
    const auto obs = observe(s, noise, params, rng);
    const auto report = mmse_gaussian(svd_spectrum(obs.y), lambda);
    samples.push_back({lambda, report.theory_mmse});
    divergent.push_back(report.inverse_moment_divergent);
  }
  const auto mi = mutual_information_curve(samples, base.alpha);

  std::ofstream file;
  std::ostream* sink = &out;
  if (!a.output.empty()) {
    file = open_output(a.output);
    sink = &file;
  }
  *sink << "lambda,mmse,mi,inverse_moment_divergent\n";
  for (std::size_t i = 0; i < samples.size(); ++i)
    *sink << format_double(samples[i].lambda) << ',' << format_double(samples[i].mmse) << ','
          << format_double(mi[i].mi) << ',' << (divergent[i] ? 1 : 0) << '\n';
  if (!a.output.empty()) out << "wrote " << a.output << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rotation-invariant denoising of rectangular matrices"};
  app.require_subcommand(1);

  DenoiseArgs dn;
  auto* denoise_cmd = app.add_subcommand("denoise", "Denoise a stored observation matrix");
  denoise_cmd->add_option("--input", dn.input, "Observation matrix (.csv or binary)")->required();
  denoise_cmd->add_option("--snr", dn.snr, "Signal-to-noise ratio lambda")->required();
  denoise_cmd->add_option("--noise", dn.noise, "Noise model")
      ->check(CLI::IsMember({"gaussian", "uniform02"}));
  denoise_cmd->add_option("--alpha", dn.alpha, "Expected aspect ratio n/m");
  denoise_cmd->add_option("--eta", dn.eta, "Stieltjes bandwidth override");
  denoise_cmd->add_option("--output", dn.output, "Estimate file")->required();

  std::string experiment_config;
  auto* experiment_cmd = app.add_subcommand("experiment", "Run an MSE-versus-SNR sweep");
  experiment_cmd->add_option("--config", experiment_config, "JSON config")->required();

  std::string overlap_config;
  auto* overlap_cmd = app.add_subcommand("overlap", "Run a fixed-signal overlap experiment");
  overlap_cmd->add_option("--config", overlap_config, "JSON config")->required();

  MmseArgs mm;
  auto* mmse_cmd = app.add_subcommand("mmse-curve", "Gaussian-noise MMSE and mutual information");
  mmse_cmd->add_option("--prior", mm.prior, "gaussian | sparse:<p> | uniform:<lo>:<hi>");
  mmse_cmd->add_option("--lambda-max", mm.lambda_max)->required();
  mmse_cmd->add_option("--points", mm.points)->required();
  mmse_cmd->add_option("--n", mm.n);
  mmse_cmd->add_option("--m", mm.m);
  mmse_cmd->add_option("--seed", mm.seed);
  mmse_cmd->add_option("--output", mm.output, "CSV file (default: stdout)");

  auto* check_cmd = app.add_subcommand("check", "Run the invariant suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  try {
    if (*denoise_cmd) return cmd_denoise(dn, out);
    if (*experiment_cmd) return cmd_experiment(experiment_config, out, err);
    if (*overlap_cmd) return cmd_overlap(overlap_config, out);
    if (*mmse_cmd) return cmd_mmse_curve(mm, out);
    if (*check_cmd) return run_property_checks(out) ? kExitOk : kExitNumerical;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace rrie
