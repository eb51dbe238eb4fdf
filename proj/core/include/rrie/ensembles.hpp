#pragma once

#include <functional>
#include <optional>
#include <string>

#include "rrie/freeprob.hpp"
#include "rrie/rng.hpp"
#include "rrie/types.hpp"

namespace rrie {

/// Dimensions and SNR of the channel Y = sqrt(snr) * S + Z.
/// Always n <= m; callers holding a tall matrix must transpose it first.
struct ChannelParams {
  Index n = 0;
  Index m = 0;
  double snr = 0.0;
  double alpha = 0.0;

  /// Builds params with alpha = n / m. Throws InvalidArgument on n > m,
  /// nonpositive dimensions or negative snr.
  static ChannelParams make(Index n, Index m, double snr);
  void validate() const;
};

/// Draws n singular values. Must return finite nonnegative values.
using SpectrumSampler = std::function<Vector(Index n, Rng& rng)>;

struct SignalPrior {
  enum class Kind { GaussianIid, SparseDiag, HaarSpectrum };

  Kind kind = Kind::GaussianIid;
  double sparsity = 0.0;  // mass p of the atom at 0 (SparseDiag)
  SpectrumSampler sampler;

  static SignalPrior gaussian() { return {}; }
  static SignalPrior sparse(double p);
  static SignalPrior haar_spectrum(SpectrumSampler sampler);

  /// E[(1/N) ||S||_F^2] for the given channel, used to normalise MSE.
  /// Returns nullopt for user samplers, whose law is unknown here.
  std::optional<double> second_moment(const ChannelParams& params) const;
};

struct NoiseModel {
  enum class Kind { GaussianIid, HaarUniform, HaarSpectrum };

  Kind kind = Kind::GaussianIid;
  SpectrumSampler sampler;
  /// Rectangular R-transform of the noise singular value law; may be empty
  /// for HaarSpectrum noise, in which case only the Gaussian path is unusable
  /// and general shrinkage refuses to run.
  RTransform rtransform;

  /// I.i.d. N(0, 1/n) entries; R-transform z / alpha.
  static NoiseModel gaussian(double alpha);
  /// Haar-rotated singular values i.i.d. uniform on [0, 2]. The closed-form
  /// R-transform is only known for alpha = 1; other ratios throw.
  static NoiseModel uniform02(double alpha);
  static NoiseModel haar_spectrum(SpectrumSampler sampler, RTransform rtransform = {});
  /// Degenerate all-zero noise (R-transform identically 0).
  static NoiseModel zero();
};

struct Observation {
  Matrix y;
  ChannelParams params;
  std::optional<Matrix> truth;
  /// Stream the noise was drawn from; regenerate_noise() replays it.
  SeedRecord noise_seed;
};

Matrix sample_gaussian_matrix(Index n, Index m, double entry_variance, Rng& rng);

/// Haar-distributed n x n orthogonal matrix: QR of a Gaussian matrix with
/// the columns of Q multiplied by sign(diag(R)).
Matrix sample_haar_orthogonal(Index n, Rng& rng);

/// U * diag_{n x m}(sigma) * V^T with independent Haar U (n x n), V (m x m).
Matrix sample_haar_rotated(const Vector& sigma, Index n, Index m, Rng& rng);

Matrix sample_signal(const SignalPrior& prior, const ChannelParams& params, Rng& rng);

Matrix sample_noise(const NoiseModel& noise, const ChannelParams& params, Rng& rng);

/// Y = sqrt(snr) * S + Z. Z is drawn from a child stream forked off `rng`,
/// recorded in Observation::noise_seed.
Observation observe(const Matrix& s, const NoiseModel& noise, const ChannelParams& params,
                    Rng& rng);

/// Redraws the exact noise matrix used by `obs`.
Matrix regenerate_noise(const Observation& obs, const NoiseModel& noise);

std::string to_string(SignalPrior::Kind kind);
std::string to_string(NoiseModel::Kind kind);

}  // namespace rrie
