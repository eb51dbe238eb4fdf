#include "rrie/checks.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "rrie/error.hpp"
#include "rrie/harness.hpp"
#include "rrie/mmse.hpp"
#include "rrie/rie.hpp"
#include "rrie/spectral.hpp"

namespace rrie {

namespace {

using std::numbers::pi;

struct Check {
  std::string name;
  std::function<std::string()> run;  // empty string: pass
};

std::string rotation_equivariance() {
  Rng rng(11, 0);
  const Index n = 30;
  const Index m = 45;
  const auto noise = NoiseModel::gaussian(static_cast<double>(n) / m);
  for (int k = 0; k < 5; ++k) {
    const Matrix y = sample_gaussian_matrix(n, m, 1.0 / n, rng);
    const Matrix u = sample_haar_orthogonal(n, rng);
    const Matrix v = sample_haar_orthogonal(m, rng);
    const Matrix a = denoise(y, 1.0, noise);
    const Matrix b = denoise(u * y * v.transpose(), 1.0, noise);
    const double rel = (b - u * a * v.transpose()).norm() / a.norm();
    if (!(rel < 1e-6)) return "relative error " + std::to_string(rel);
  }
  return {};
}

std::string gaussian_reduction() {
  Rng rng(12, 0);
  for (double alpha : {1.0, 0.5}) {
    const Index n = 40;
    const auto m = static_cast<Index>(n / alpha);
    const auto y = svd_spectrum(sample_gaussian_matrix(n, m, 2.0 / n, rng), true);
    const auto d = eval_at_singular_values(y, default_eta(y));
    const auto a = gaussian_rie_shrink(y, 1.5, alpha, d);
    const auto b = general_rie_shrink(
        y, 1.5, alpha, [alpha](Complex z) { return closed_form::marchenko_pastur(z, alpha); }, d);
    const double diff = (a.xi - b.xi).cwiseAbs().maxCoeff();
    if (!(diff < 1e-10)) return "max difference " + std::to_string(diff);
  }
  return {};
}

std::string mse_expansion() {
  Rng rng(13, 0);
  const Index n = 20;
  const Index m = 30;
  const Matrix s = sample_gaussian_matrix(n, m, 1.0 / n, rng);
  const auto y = svd_spectrum(sample_gaussian_matrix(n, m, 1.0 / n, rng) + s, true);
  ShrinkageResult r = identity_shrink(y, 1.0);
  for (Index i = 0; i < n; ++i) r.xi[i] = rng.normal();
  const double direct = empirical_mse(s, reconstruct(y, r));
  const double cross = (y.left->transpose() * s * *y.right).diagonal().dot(r.xi);
  const double expanded = (s.squaredNorm() + r.xi.squaredNorm() - 2.0 * cross) / n;
  if (!(std::abs(direct - expanded) < 1e-8)) return "mismatch " + std::to_string(direct - expanded);
  return {};
}

// Two semicircles of radius 1 centred at +-2; vanishes at the origin.
DensityEstimate two_bumps(Index points) {
  DensityEstimate f;
  f.grid.resize(points);
  f.mu.resize(points);
  f.hilbert.resize(points);
  f.edge.assign(static_cast<std::size_t>(points), false);
  const double k = 3.2;
  for (Index i = 0; i < points; ++i) {
    const double x = -k + 2.0 * k * static_cast<double>(i) / static_cast<double>(points - 1);
    double mu = 0.0;
    double h = 0.0;
    for (double c : {-2.0, 2.0}) {
      const double t = x - c;
      if (std::abs(t) <= 1.0) {
        mu += std::sqrt(1.0 - t * t) / pi;
        h += t / pi;
      } else {
        h += (t - std::copysign(std::sqrt(t * t - 1.0), t)) / pi;
      }
    }
    f.grid[i] = x;
    f.mu[i] = mu;
    f.hilbert[i] = h;
  }
  return f;
}

std::string hilbert_identities() {
  const auto r = hilbert_identity_suite(two_bumps(4096));
  if (!(std::abs(r.cubic) < 1e-3 && std::abs(r.moment) < 1e-3 && std::abs(r.inverse) < 1e-3))
    return "residuals " + std::to_string(r.cubic) + ", " + std::to_string(r.moment) + ", " +
           std::to_string(r.inverse);
  return {};
}

std::string i_mmse() {
  std::vector<MmseSample> samples;
  for (int i = 0; i <= 300; ++i) {
    const double l = 0.01 * i;
    samples.push_back({l, 1.0 / (1.0 + l)});
  }
  double worst = 0.0;
  for (const auto& s : mutual_information_curve(samples, 1.0))
    worst = std::max(worst, std::abs(s.mi - 0.5 * std::log1p(s.lambda)));
  if (!(worst < 1e-3)) return "max error " + std::to_string(worst);
  return {};
}

std::string determinism() {
  ExperimentConfig c;
  c.n = 24;
  c.m = 24;
  c.lambda_grid = {1.0};
  c.trials = 3;
  c.master_seed = 5;
  const auto a = run_experiment(c);
  c.threads = 2;
  const auto b = run_experiment(c);
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    if (a.rows[i].mse != b.rows[i].mse) return "row " + std::to_string(i) + " differs";
  return {};
}

std::string density_mass() {
  Rng rng(14, 0);
  const auto y = svd_spectrum(sample_gaussian_matrix(200, 200, 1.0 / 200, rng));
  const auto d = estimate_density(y, Support::Symmetric, kDefaultGridPoints, std::nullopt);
  if (!(std::abs(d.raw_mass - 1.0) < 0.02)) return "raw mass " + std::to_string(d.raw_mass);
  for (Index i = 0; i < d.mu.size(); ++i)
    if (d.mu[i] != d.mu[d.mu.size() - 1 - i]) return "density is not even";
  return {};
}

}  // namespace

bool run_property_checks(std::ostream& out) {
  const std::vector<Check> checks = {
      {"rotation-equivariance", rotation_equivariance},
      {"gaussian-reduction", gaussian_reduction},
      {"mse-expansion", mse_expansion},
      {"hilbert-identities", hilbert_identities},
      {"i-mmse", i_mmse},
      {"density-mass", density_mass},
      {"determinism", determinism},
  };
  bool all = true;
  for (const auto& c : checks) {
    std::string failure;
    try {
      failure = c.run();
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    out << (failure.empty() ? "ok    " : "FAIL  ") << c.name;
    if (!failure.empty()) out << ": " << failure;
    out << '\n';
    all = all && failure.empty();
  }
  return all;
}

}  // namespace rrie
