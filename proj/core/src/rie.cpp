#include "rrie/rie.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "rrie/csv.hpp"
#include "rrie/error.hpp"
#include "rrie/parallel.hpp"

namespace rrie {

using std::numbers::pi;

std::string to_string(ShrinkMethod method) {
  switch (method) {
    case ShrinkMethod::Oracle: return "oracle";
    case ShrinkMethod::GaussianRie: return "gaussian-rie";
    case ShrinkMethod::GeneralRie: return "general-rie";
    case ShrinkMethod::Identity: return "identity";
  }
  return "?";
}

Index ShrinkageResult::edge_count() const {
  Index c = 0;
  for (bool e : edge) c += e ? 1 : 0;
  return c;
}

namespace {

void require_vectors(const SingularSpectrum& y) {
  if (!y.has_vectors()) throw InvalidArgument("singular vectors of Y were not retained");
}

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be > 0");
}

void check_density(const SingularSpectrum& y, const PointDensity& density) {
  if (density.mu.size() != y.values.size() || density.hilbert.size() != y.values.size() ||
      density.edge.size() != static_cast<std::size_t>(y.values.size()))
    throw InvalidArgument("density values are not aligned with the spectrum");
}

ShrinkageResult make_result(const SingularSpectrum& y, ShrinkMethod method) {
  ShrinkageResult r;
  r.gamma = y.values;
  r.xi = Vector::Zero(y.values.size());
  r.edge.assign(static_cast<std::size_t>(y.values.size()), false);
  r.method = method;
  return r;
}

void finish(ShrinkageResult& r, const ShrinkOptions& options) {
  if (options.clamp_nonnegative) r.xi = r.xi.cwiseMax(0.0);
}

}  // namespace

ShrinkageResult oracle_singular_values(const Matrix& s, const SingularSpectrum& y) {
  require_vectors(y);
  if (s.rows() != y.n || s.cols() != y.m) throw InvalidArgument("oracle: signal shape mismatch");
  ShrinkageResult r = make_result(y, ShrinkMethod::Oracle);
  const Matrix us = y.left->transpose() * s;  // n x m
  const Matrix& v = *y.right;                 // m x n
  for (Index i = 0; i < y.n; ++i) r.xi[i] = us.row(i).dot(v.col(i));
  return r;
}

ShrinkageResult identity_shrink(const SingularSpectrum& y, double lambda) {
  check_lambda(lambda);
  ShrinkageResult r = make_result(y, ShrinkMethod::Identity);
  r.xi = y.values / std::sqrt(lambda);
  return r;
}

ShrinkageResult gaussian_rie_shrink(const SingularSpectrum& y, double lambda, double alpha,
                                    const PointDensity& density, ShrinkOptions options) {
  check_lambda(lambda);
  check_density(y, density);
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
  ShrinkageResult r = make_result(y, ShrinkMethod::GaussianRie);
  const double scale = 1.0 / std::sqrt(lambda);
  for (Index i = 0; i < y.n; ++i) {
    const double g = y.values[i];
    if (density.edge[i]) {
      r.xi[i] = g * scale;
      r.edge[i] = true;
      continue;
    }
    double correction = 2.0 * pi * density.hilbert[i];
    if (alpha < 1.0) {
      if (g == 0.0) throw InvalidArgument("zero singular value with alpha < 1");
      correction += (1.0 - alpha) / alpha / g;
    }
    r.xi[i] = (g - correction) * scale;
  }
  finish(r, options);
  return r;
}

ShrinkageResult general_rie_shrink(const SingularSpectrum& y, double lambda, double alpha,
                                   const RTransform& noise_rtransform,
                                   const PointDensity& density, ShrinkOptions options) {
  check_lambda(lambda);
  check_density(y, density);
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
  if (!noise_rtransform) throw InvalidArgument("general shrinkage needs a noise R-transform");
  ShrinkageResult r = make_result(y, ShrinkMethod::GeneralRie);
  const double scale = 1.0 / std::sqrt(lambda);
  for (Index i = 0; i < y.n; ++i) {
    const double g = y.values[i];
    const double pi_mu = pi * density.mu[i];
    if (density.edge[i] || !(pi_mu > 0.0)) {
      r.xi[i] = g * scale;
      r.edge[i] = true;
      continue;
    }
    const Complex res = density.resolvent(i);  // pi H + i pi mu
    Complex w = alpha * res * res;
    if (alpha < 1.0) {
      if (g == 0.0) throw InvalidArgument("zero singular value with alpha < 1");
      w += (1.0 - alpha) / g * res;
    }
    const double xi = (g - noise_rtransform(w).imag() / pi_mu) * scale;
    if (!std::isfinite(xi)) {
      r.xi[i] = g * scale;
      r.edge[i] = true;
      continue;
    }
    r.xi[i] = xi;
  }
  finish(r, options);
  return r;
}

ShrinkageResult rie_shrink(const SingularSpectrum& y, double lambda, const NoiseModel& noise,
                           std::optional<double> eta, ShrinkOptions options) {
  const auto density = eval_at_singular_values(y, eta.value_or(default_eta(y)));
  if (noise.kind == NoiseModel::Kind::GaussianIid)
    return gaussian_rie_shrink(y, lambda, y.alpha(), density, options);
  if (!noise.rtransform)
    throw InvalidArgument("noise model has no R-transform; cannot build the general shrinker");
  return general_rie_shrink(y, lambda, y.alpha(), noise.rtransform, density, options);
}

Matrix reconstruct(const SingularSpectrum& y, const ShrinkageResult& shrinkage) {
  require_vectors(y);
  if (shrinkage.xi.size() != y.n) throw InvalidArgument("shrinkage length does not match spectrum");
  return (*y.left * shrinkage.xi.asDiagonal()) * y.right->transpose();
}

Matrix denoise(const Matrix& y, double lambda, const NoiseModel& noise, std::optional<double> eta,
               ShrinkOptions options) {
  const auto spectrum = svd_spectrum(y, true);
  return reconstruct(spectrum, rie_shrink(spectrum, lambda, noise, eta, options));
}

ZetaPair zeta_star_from_resolvent(Complex z, Complex g, double alpha,
                                  const RTransform& noise_rtransform) {
  if (!noise_rtransform) throw InvalidArgument("zeta_star needs a noise R-transform");
  const Complex m = z * g - 1.0;
  const Complex u = t_alpha(m, alpha) / (z * z);
  const Complex big_z = noise_rtransform(u);
  ZetaPair out;
  out.z = z;
  out.zeta_a = z * big_z / (m + 1.0);
  out.zeta_b = alpha * z * big_z / (alpha * m + 1.0);
  if (!std::isfinite(std::abs(out.zeta_a)) || !std::isfinite(std::abs(out.zeta_b)))
    throw NumericalFailure("zeta_star is not finite at the requested point");
  return out;
}

ZetaPair zeta_star(Complex z, const SingularSpectrum& y, double alpha,
                   const RTransform& noise_rtransform) {
  return zeta_star_from_resolvent(z, stieltjes_symmetrized(y.values, z), alpha, noise_rtransform);
}

double overlap_theory(double gamma, double sigma, const SingularSpectrum& y, double alpha,
                      const RTransform& noise_rtransform, double eta) {
  if (!(eta > 0.0)) throw InvalidArgument("overlap_theory: eta must be positive");
  if (!(sigma >= 0.0)) throw InvalidArgument("overlap_theory: sigma must be >= 0");
  const Complex z{gamma, -eta};
  const Complex g = stieltjes_symmetrized(y.values, z);
  const double pi_mu = g.imag();
  if (!(pi_mu > 1e-12)) throw NumericalFailure("density vanishes at gamma; overlap undefined");
  const auto zeta = zeta_star_from_resolvent(z, g, alpha, noise_rtransform);
  const Complex denom = (z - zeta.zeta_b) * (z - zeta.zeta_a) - sigma * sigma;
  return (sigma / denom).imag() / pi_mu;
}

std::vector<OverlapCurve> overlap_empirical(const Matrix& s_fixed, const NoiseModel& noise,
                                            const ChannelParams& params,
                                            const OverlapOptions& options) {
  params.validate();
  if (options.trials < 1) throw InvalidArgument("overlap_empirical needs trials >= 1");
  if (options.rank_bin < 1 || params.n % options.rank_bin != 0)
    throw InvalidArgument("rank_bin must divide n");
  if (s_fixed.rows() != params.n || s_fixed.cols() != params.m)
    throw InvalidArgument("overlap_empirical: signal shape mismatch");
  for (Index j : options.sigma_indices)
    if (j < 0 || j >= params.n) throw InvalidArgument("sigma index out of range");

  const auto signal = svd_spectrum(s_fixed, true);
  const Index n = params.n;
  const Index bins = n / options.rank_bin;
  const auto k = static_cast<Index>(options.sigma_indices.size());
  Matrix sl(n, k);
  Matrix sr(params.m, k);
  for (Index c = 0; c < k; ++c) {
    sl.col(c) = signal.left->col(options.sigma_indices[c]);
    sr.col(c) = signal.right->col(options.sigma_indices[c]);
  }

  // Per-trial buffers, reduced in trial order afterwards for determinism.
  const auto trials = static_cast<std::size_t>(options.trials);
  std::vector<Matrix> binned(trials);
  std::vector<Vector> gammas(trials);
  parallel_for(trials, worker_count(options.threads), [&](std::size_t t) {
    Rng rng(options.master_seed, t);
    const Matrix y = std::sqrt(params.snr) * s_fixed + sample_noise(noise, params, rng);
    const auto spec = svd_spectrum(y, true);
    const Matrix left = spec.left->transpose() * sl;    // n x k
    const Matrix right = spec.right->transpose() * sr;  // n x k
    const Matrix o = static_cast<double>(n) * left.cwiseProduct(right);
    Matrix b = Matrix::Zero(bins, k);
    Vector gb = Vector::Zero(bins);
    for (Index i = 0; i < n; ++i) {
      b.row(i / options.rank_bin) += o.row(i);
      gb[i / options.rank_bin] += spec.values[i];
    }
    binned[t] = b / static_cast<double>(options.rank_bin);
    gammas[t] = gb / static_cast<double>(options.rank_bin);
  });

  Matrix mean = Matrix::Zero(bins, k);
  Vector gamma_mean = Vector::Zero(bins);
  for (std::size_t t = 0; t < trials; ++t) {
    mean += binned[t];
    gamma_mean += gammas[t];
  }
  mean /= static_cast<double>(trials);
  gamma_mean /= static_cast<double>(trials);
  Matrix var = Matrix::Zero(bins, k);
  for (std::size_t t = 0; t < trials; ++t) var += (binned[t] - mean).cwiseAbs2();
  const double tr = static_cast<double>(trials);
  const Matrix stderr_m = trials > 1 ? Matrix((var / (tr - 1.0)).cwiseSqrt() / std::sqrt(tr))
                                     : Matrix(Matrix::Zero(bins, k));

  std::vector<OverlapCurve> curves;
  for (Index c = 0; c < k; ++c) {
    OverlapCurve curve;
    curve.gamma = gamma_mean;
    curve.sigma_index = options.sigma_indices[c];
    curve.sigma = std::sqrt(params.snr) * signal.values[curve.sigma_index];
    curve.values = mean.col(c);
    curve.std_error = stderr_m.col(c);
    curves.push_back(std::move(curve));
  }
  return curves;
}

void write_shrinkage_csv(std::ostream& out, const ShrinkageResult& shrinkage) {
  out << "gamma,xi,flag\n";
  for (Index i = 0; i < shrinkage.xi.size(); ++i)
    out << format_double(shrinkage.gamma[i]) << ',' << format_double(shrinkage.xi[i]) << ','
        << (shrinkage.edge[i] ? 1 : 0) << '\n';
}

void write_overlap_csv(std::ostream& out, std::span<const OverlapCurve> curves) {
  out << "gamma,sigma,overlap\n";
  for (const auto& c : curves)
    for (Index i = 0; i < c.values.size(); ++i)
      out << format_double(c.gamma[i]) << ',' << format_double(c.sigma) << ','
          << format_double(c.values[i]) << '\n';
}

}  // namespace rrie
