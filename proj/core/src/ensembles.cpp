#include "rrie/ensembles.hpp"

#include <cmath>
#include <utility>

#include "rrie/error.hpp"

namespace rrie {

ChannelParams ChannelParams::make(Index n, Index m, double snr) {
  ChannelParams p;
  p.n = n;
  p.m = m;
  p.snr = snr;
  p.alpha = m > 0 ? static_cast<double>(n) / static_cast<double>(m) : 0.0;
  p.validate();
  return p;
}

void ChannelParams::validate() const {
  if (n < 1 || m < 1) throw InvalidArgument("channel dimensions must be positive");
  if (n > m) throw InvalidArgument("channel needs n <= m; transpose the problem");
  if (!(snr >= 0.0) || !std::isfinite(snr)) throw InvalidArgument("snr must be finite and >= 0");
  if (std::abs(alpha - static_cast<double>(n) / static_cast<double>(m)) > 1e-12)
    throw InvalidArgument("alpha must equal n / m");
}

SignalPrior SignalPrior::sparse(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("sparsity p must lie in [0, 1]");
  SignalPrior prior;
  prior.kind = Kind::SparseDiag;
  prior.sparsity = p;
  return prior;
}

SignalPrior SignalPrior::haar_spectrum(SpectrumSampler sampler) {
  if (!sampler) throw InvalidArgument("haar-spectrum prior needs a sampler");
  SignalPrior prior;
  prior.kind = Kind::HaarSpectrum;
  prior.sampler = std::move(sampler);
  return prior;
}

std::optional<double> SignalPrior::second_moment(const ChannelParams& params) const {
  switch (kind) {
    case Kind::GaussianIid:
      return 1.0 / params.alpha;
    case Kind::SparseDiag:
      return 1.0 - sparsity;
    case Kind::HaarSpectrum:
      return std::nullopt;
  }
  return std::nullopt;
}

NoiseModel NoiseModel::gaussian(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
  NoiseModel noise;
  noise.kind = Kind::GaussianIid;
  noise.rtransform = [alpha](Complex z) { return closed_form::marchenko_pastur(z, alpha); };
  return noise;
}

NoiseModel NoiseModel::uniform02(double alpha) {
  if (alpha != 1.0)
    throw InvalidArgument("uniform [0,2] noise has a closed-form R-transform only for alpha = 1");
  NoiseModel noise;
  noise.kind = Kind::HaarUniform;
  noise.sampler = [](Index n, Rng& rng) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = rng.uniform(0.0, 2.0);
    return v;
  };
  noise.rtransform = [](Complex z) { return closed_form::uniform02(z); };
  return noise;
}

NoiseModel NoiseModel::haar_spectrum(SpectrumSampler sampler, RTransform rtransform) {
  if (!sampler) throw InvalidArgument("haar-spectrum noise needs a sampler");
  NoiseModel noise;
  noise.kind = Kind::HaarSpectrum;
  noise.sampler = std::move(sampler);
  noise.rtransform = std::move(rtransform);
  return noise;
}

NoiseModel NoiseModel::zero() {
  return haar_spectrum([](Index n, Rng&) { return Vector::Zero(n).eval(); },
                       [](Complex) { return Complex{0.0, 0.0}; });
}

Matrix sample_gaussian_matrix(Index n, Index m, double entry_variance, Rng& rng) {
  if (n < 1 || m < 1) throw InvalidArgument("sample_gaussian_matrix: dimensions must be positive");
  if (!(entry_variance >= 0.0)) throw InvalidArgument("entry variance must be >= 0");
  const double sd = std::sqrt(entry_variance);
  Matrix a(n, m);
  // Fill row-major so the draw order does not depend on Eigen's storage.
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) a(i, j) = sd * rng.normal();
  return a;
}

Matrix sample_haar_orthogonal(Index n, Rng& rng) {
  const Matrix g = sample_gaussian_matrix(n, n, 1.0, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const auto& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

namespace {

Vector checked_spectrum(const SpectrumSampler& sampler, Index n, Rng& rng) {
  Vector sigma = sampler(n, rng);
  if (sigma.size() != n) throw InvalidArgument("spectrum sampler returned the wrong length");
  if (!sigma.allFinite() || (sigma.array() < 0.0).any())
    throw InvalidArgument("spectrum sampler must return finite nonnegative values");
  return sigma;
}

}  // namespace

Matrix sample_haar_rotated(const Vector& sigma, Index n, Index m, Rng& rng) {
  if (n < 1 || m < 1 || n > m) throw InvalidArgument("sample_haar_rotated needs 1 <= n <= m");
  if (sigma.size() != n) throw InvalidArgument("sample_haar_rotated: sigma must have length n");
  if (!sigma.allFinite() || (sigma.array() < 0.0).any())
    throw InvalidArgument("singular values must be finite and nonnegative");
  const Matrix u = sample_haar_orthogonal(n, rng);
  const Matrix v = sample_haar_orthogonal(m, rng);
  // U diag(sigma) [I_n 0] V^T only touches the first n columns of V.
  return (u * sigma.asDiagonal()) * v.leftCols(n).transpose();
}

Matrix sample_signal(const SignalPrior& prior, const ChannelParams& params, Rng& rng) {
  params.validate();
  switch (prior.kind) {
    case SignalPrior::Kind::GaussianIid:
      return sample_gaussian_matrix(params.n, params.m, 1.0 / static_cast<double>(params.n), rng);
    case SignalPrior::Kind::SparseDiag: {
      if (!(prior.sparsity >= 0.0 && prior.sparsity <= 1.0))
        throw InvalidArgument("sparsity p must lie in [0, 1]");
      Vector sigma(params.n);
      for (Index i = 0; i < params.n; ++i) sigma[i] = rng.uniform() < prior.sparsity ? 0.0 : 1.0;
      return sample_haar_rotated(sigma, params.n, params.m, rng);
    }
    case SignalPrior::Kind::HaarSpectrum:
      if (!prior.sampler) throw InvalidArgument("haar-spectrum prior needs a sampler");
      return sample_haar_rotated(checked_spectrum(prior.sampler, params.n, rng), params.n,
                                 params.m, rng);
  }
  throw InvalidArgument("unknown signal prior");
}

Matrix sample_noise(const NoiseModel& noise, const ChannelParams& params, Rng& rng) {
  params.validate();
  if (noise.kind == NoiseModel::Kind::GaussianIid)
    return sample_gaussian_matrix(params.n, params.m, 1.0 / static_cast<double>(params.n), rng);
  if (!noise.sampler) throw InvalidArgument("noise model has no spectrum sampler");
  return sample_haar_rotated(checked_spectrum(noise.sampler, params.n, rng), params.n, params.m,
                             rng);
}

Observation observe(const Matrix& s, const NoiseModel& noise, const ChannelParams& params,
                    Rng& rng) {
  params.validate();
  if (s.rows() != params.n || s.cols() != params.m)
    throw InvalidArgument("observe: signal shape does not match channel");
  Rng noise_rng = rng.fork();
  Observation obs;
  obs.params = params;
  obs.noise_seed = noise_rng.seed();
  const Matrix z = sample_noise(noise, params, noise_rng);
  obs.y = std::sqrt(params.snr) * s + z;
  obs.truth = s;
  return obs;
}

Matrix regenerate_noise(const Observation& obs, const NoiseModel& noise) {
  Rng rng(obs.noise_seed);
  return sample_noise(noise, obs.params, rng);
}

std::string to_string(SignalPrior::Kind kind) {
  switch (kind) {
    case SignalPrior::Kind::GaussianIid: return "gaussian";
    case SignalPrior::Kind::SparseDiag: return "sparse";
    case SignalPrior::Kind::HaarSpectrum: return "haar-spectrum";
  }
  return "?";
}

std::string to_string(NoiseModel::Kind kind) {
  switch (kind) {
    case NoiseModel::Kind::GaussianIid: return "gaussian";
    case NoiseModel::Kind::HaarUniform: return "uniform02";
    case NoiseModel::Kind::HaarSpectrum: return "haar-spectrum";
  }
  return "?";
}

}  // namespace rrie
