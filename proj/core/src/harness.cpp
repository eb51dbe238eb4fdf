#include "rrie/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "rrie/csv.hpp"
#include "rrie/error.hpp"
#include "rrie/mmse.hpp"
#include "rrie/parallel.hpp"
#include "rrie/spectral.hpp"

namespace rrie {

namespace {

// Stream reserved for the fixed signal; trial streams count up from 0.
constexpr std::uint64_t kFixedSignalStream = 0xF1ED5164A1ull;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Matrix fixed_signal(const ExperimentConfig& config, const SignalPrior& prior,
                    const ChannelParams& params) {
  Rng rng(config.master_seed, kFixedSignalStream);
  return sample_signal(prior, params, rng);
}

double signal_second_moment(const SignalPrior& prior, const ChannelParams& params, const Matrix& s) {
  if (auto m2 = prior.second_moment(params)) return *m2;
  return s.squaredNorm() / static_cast<double>(params.n);
}

}  // namespace

const Aggregate* ExperimentResult::find(Estimator estimator, double lambda) const {
  for (const auto& a : aggregates)
    if (a.estimator == estimator && a.lambda == lambda) return &a;
  return nullptr;
}

std::uint64_t trial_stream(Index lambda_index, Index trial, Index trials) {
  return static_cast<std::uint64_t>(lambda_index) * static_cast<std::uint64_t>(trials) +
         static_cast<std::uint64_t>(trial);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const SignalPrior prior = config.prior.build();
  const NoiseModel noise = config.noise.build(config.alpha());
  const auto n_est = config.estimators.size();
  const auto n_lambda = config.lambda_grid.size();
  const auto trials = static_cast<std::size_t>(config.trials);

  std::optional<Matrix> s_fixed;
  if (config.fixed_signal)
    s_fixed = fixed_signal(config, prior, ChannelParams::make(config.n, config.m, 0.0));

  ExperimentResult result;
  result.config = config;
  result.rows.resize(n_lambda * trials * n_est);

  parallel_for(n_lambda * trials, worker_count(config.threads), [&](std::size_t job) {
    const auto li = static_cast<Index>(job / trials);
    const auto trial = static_cast<Index>(job % trials);
    const double lambda = config.lambda_grid[static_cast<std::size_t>(li)];
    const SeedRecord seed{config.master_seed, trial_stream(li, trial, config.trials)};
    TrialRow* rows = &result.rows[job * n_est];
    for (std::size_t e = 0; e < n_est; ++e) {
      rows[e].estimator = config.estimators[e];
      rows[e].lambda = lambda;
      rows[e].trial = trial;
      rows[e].seed = seed;
    }
    try {
      const auto start = Clock::now();
      const auto params = ChannelParams::make(config.n, config.m, lambda);
      Rng rng(seed);
      const Matrix s = s_fixed ? *s_fixed : sample_signal(prior, params, rng);
      const auto obs = observe(s, noise, params, rng);
      const auto spec = svd_spectrum(obs.y, true);
      const double shared_ms = elapsed_ms(start);
      const double m2 = signal_second_moment(prior, params, s);
      for (std::size_t e = 0; e < n_est; ++e) {
        const auto t0 = Clock::now();
        ShrinkageResult shrink;
        switch (config.estimators[e]) {
          case Estimator::Rie: shrink = rie_shrink(spec, lambda, noise, config.eta_override); break;
          case Estimator::Oracle: shrink = oracle_singular_values(s, spec); break;
          case Estimator::Identity: shrink = identity_shrink(spec, lambda); break;
        }
        const double mse = empirical_mse(s, reconstruct(spec, shrink));
        rows[e].mse = mse;
        rows[e].normalized_mse = m2 > 0.0 ? normalized_mse(mse, m2) : mse;
        rows[e].runtime_ms = shared_ms + elapsed_ms(t0);
        if (!std::isfinite(mse)) throw NumericalFailure("non-finite MSE");
      }
    } catch (const Error& err) {
      for (std::size_t e = 0; e < n_est; ++e) {
        rows[e].ok = false;
        rows[e].error = err.what();
      }
    }
  });

  for (std::size_t job = 0; job < n_lambda * trials; ++job)
    if (!result.rows[job * n_est].ok) ++result.failed_trials;
  result.aggregates = aggregate_rows(result.rows, config.estimators, config.lambda_grid);
  return result;
}

std::vector<Aggregate> aggregate_rows(const std::vector<TrialRow>& rows,
                                      const std::vector<Estimator>& estimators,
                                      const std::vector<double>& lambda_grid) {
  std::vector<Aggregate> out;
  for (auto est : estimators) {
    for (double lambda : lambda_grid) {
      Aggregate a;
      a.estimator = est;
      a.lambda = lambda;
      double sum = 0.0;
      double sum_norm = 0.0;
      for (const auto& r : rows) {
        if (!r.ok || r.estimator != est || r.lambda != lambda) continue;
        sum += r.mse;
        sum_norm += r.normalized_mse;
        ++a.count;
      }
      if (a.count > 0) {
        const double c = static_cast<double>(a.count);
        a.mean_mse = sum / c;
        a.mean_normalized_mse = sum_norm / c;
        double ss = 0.0;
        for (const auto& r : rows)
          if (r.ok && r.estimator == est && r.lambda == lambda)
            ss += (r.mse - a.mean_mse) * (r.mse - a.mean_mse);
        a.std_error = a.count > 1 ? std::sqrt(ss / (c - 1.0)) / std::sqrt(c) : 0.0;
      } else {
        a.mean_mse = a.mean_normalized_mse = a.std_error = std::nan("");
      }
      out.push_back(a);
    }
  }
  return out;
}

OverlapExperimentResult run_overlap_experiment(const ExperimentConfig& config) {
  config.validate();
  if (!config.fixed_signal) throw InvalidArgument("overlap experiment requires fixed_signal");
  if (config.sigma_indices.empty()) throw InvalidArgument("overlap experiment needs sigma_indices");
  const SignalPrior prior = config.prior.build();
  const NoiseModel noise = config.noise.build(config.alpha());
  if (!noise.rtransform) throw InvalidArgument("overlap theory needs the noise R-transform");
  const auto params = ChannelParams::make(config.n, config.m, config.lambda_grid.front());
  const Matrix s = fixed_signal(config, prior, params);

  OverlapOptions opts;
  opts.trials = config.trials;
  opts.sigma_indices = config.sigma_indices;
  opts.rank_bin = config.rank_bin;
  opts.master_seed = config.master_seed;
  opts.threads = config.threads;

  OverlapExperimentResult result;
  result.config = config;
  result.empirical = overlap_empirical(s, noise, params, opts);

  // Trial 0 replayed: same stream as overlap_empirical uses.
  Rng rng(config.master_seed, 0);
  const Matrix y0 = std::sqrt(params.snr) * s + sample_noise(noise, params, rng);
  const auto spec0 = svd_spectrum(y0);
  const double eta = config.eta_override.value_or(default_eta(spec0));
  const Index bins = config.n / config.rank_bin;
  for (const auto& curve : result.empirical) {
    Vector th = Vector::Zero(bins);
    Vector tg = Vector::Zero(bins);
    for (Index i = 0; i < config.n; ++i) {
      th[i / config.rank_bin] +=
          overlap_theory(spec0.values[i], curve.sigma, spec0, params.alpha, noise.rtransform, eta);
      tg[i / config.rank_bin] += spec0.values[i];
    }
    result.theory.push_back(th / static_cast<double>(config.rank_bin));
    result.theory_gamma.push_back(tg / static_cast<double>(config.rank_bin));
  }
  return result;
}

void write_overlap_experiment_csv(std::ostream& out, const OverlapExperimentResult& result) {
  out << "sigma_index,sigma,bin,gamma,overlap,stderr,theory_gamma,theory\n";
  for (std::size_t k = 0; k < result.empirical.size(); ++k) {
    const auto& c = result.empirical[k];
    for (Index b = 0; b < c.values.size(); ++b) {
      out << c.sigma_index << ',' << format_double(c.sigma) << ',' << b << ','
          << format_double(c.gamma[b]) << ',' << format_double(c.values[b]) << ','
          << format_double(c.std_error[b]) << ',' << format_double(result.theory_gamma[k][b]) << ','
          << format_double(result.theory[k][b]) << '\n';
    }
  }
}

void write_aggregate_csv(std::ostream& out, const ExperimentResult& result) {
  out << "estimator,lambda,mean_mse,stderr,n,m,trials\n";
  for (const auto& a : result.aggregates) {
    out << to_string(a.estimator) << ',' << format_double(a.lambda) << ','
        << format_double(a.mean_mse) << ',' << format_double(a.std_error) << ','
        << result.config.n << ',' << result.config.m << ',' << a.count << '\n';
  }
}

std::vector<Aggregate> read_aggregate_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "estimator,lambda,mean_mse,stderr,n,m,trials")
    throw IoError("aggregate CSV: unexpected header");
  std::vector<Aggregate> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7) throw IoError("aggregate CSV: expected 7 fields: " + line);
    Aggregate a;
    try {
      a.estimator = parse_estimator(f[0]);
    } catch (const InvalidArgument& e) {
      throw IoError(e.what());
    }
    a.lambda = parse_double(f[1]);
    a.mean_mse = parse_double(f[2]);
    a.std_error = parse_double(f[3]);
    a.count = static_cast<Index>(parse_double(f[6]));
    out.push_back(a);
  }
  return out;
}

void write_rows_csv(std::ostream& out, const ExperimentResult& result) {
  out << "estimator,lambda,trial,mse,normalized_mse,master_seed,stream,runtime_ms,ok\n";
  for (const auto& r : result.rows) {
    out << to_string(r.estimator) << ',' << format_double(r.lambda) << ',' << r.trial << ','
        << format_double(r.mse) << ',' << format_double(r.normalized_mse) << ','
        << r.seed.master << ',' << r.seed.stream << ',' << format_double(r.runtime_ms) << ','
        << (r.ok ? 1 : 0) << '\n';
  }
}

std::vector<std::filesystem::path> emit_plot_data(const ExperimentResult& result,
                                                  const std::filesystem::path& base,
                                                  PlotFormat format) {
  if (result.aggregates.empty()) throw InvalidArgument("emit_plot_data: empty result");
  if (base.has_parent_path()) std::filesystem::create_directories(base.parent_path());
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::string& suffix) {
    std::filesystem::path p = base;
    p += suffix;
    std::ofstream f(p);
    if (!f) throw IoError("cannot write " + p.string());
    written.push_back(p);
    return f;
  };
  {
    auto f = open("_aggregate.csv");
    write_aggregate_csv(f, result);
    if (!f) throw IoError("write failed: " + written.back().string());
  }
  {
    auto f = open("_rows.csv");
    write_rows_csv(f, result);
    if (!f) throw IoError("write failed: " + written.back().string());
  }
  if (format == PlotFormat::CsvAndDat) {
    auto f = open(".dat");
    bool first = true;
    for (auto est : result.config.estimators) {
      if (!first) f << "\n\n";
      first = false;
      f << "# " << to_string(est) << "\n# lambda mean_mse stderr mean_normalized_mse\n";
      for (const auto& a : result.aggregates)
        if (a.estimator == est)
          f << format_double(a.lambda) << ' ' << format_double(a.mean_mse) << ' '
            << format_double(a.std_error) << ' ' << format_double(a.mean_normalized_mse) << '\n';
    }
    if (!f) throw IoError("write failed: " + written.back().string());
  }
  return written;
}

}  // namespace rrie
