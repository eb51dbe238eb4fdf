#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rrie/ensembles.hpp"
#include "rrie/freeprob.hpp"
#include "rrie/spectral.hpp"
#include "rrie/types.hpp"

namespace rrie {

enum class ShrinkMethod { Oracle, GaussianRie, GeneralRie, Identity };

std::string to_string(ShrinkMethod method);

/// Shrunk singular values xi_i aligned with the observation's gamma_i.
/// Entries whose density fell below the floor carry the passthrough value
/// gamma_i / sqrt(lambda) and a set edge flag.
struct ShrinkageResult {
  Vector gamma;
  Vector xi;
  std::vector<bool> edge;
  ShrinkMethod method = ShrinkMethod::Identity;

  Index edge_count() const;
};

struct ShrinkOptions {
  /// Replace negative xi by 0. Off by default: the unconstrained minimiser
  /// may go negative and clamping loses optimality.
  bool clamp_nonnegative = false;
};

/// xi_i = sum_j sigma_j (u_i . s_j^l)(v_i . s_j^r) = u_i^T S v_i.
ShrinkageResult oracle_singular_values(const Matrix& s, const SingularSpectrum& y);

/// xi_i = gamma_i / sqrt(lambda).
ShrinkageResult identity_shrink(const SingularSpectrum& y, double lambda);

/// Shrinker for i.i.d. Gaussian noise:
/// xi = [gamma - (1 - alpha)/(alpha gamma) - 2 pi H[mu_bar](gamma)] / sqrt(lambda).
ShrinkageResult gaussian_rie_shrink(const SingularSpectrum& y, double lambda, double alpha,
                                    const PointDensity& density, ShrinkOptions options = {});

/// Shrinker for arbitrary rotationally invariant noise with R-transform C:
/// xi = [gamma - Im C(w) / (pi mu_bar(gamma))] / sqrt(lambda), where
/// w = G (1 - alpha + alpha gamma G) / gamma and G = pi H + i pi mu_bar.
ShrinkageResult general_rie_shrink(const SingularSpectrum& y, double lambda, double alpha,
                                   const RTransform& noise_rtransform,
                                   const PointDensity& density, ShrinkOptions options = {});

/// Picks the Gaussian shrinker for Gaussian noise, the general one otherwise,
/// estimating the density at the singular values with `eta` (default policy
/// when empty).
ShrinkageResult rie_shrink(const SingularSpectrum& y, double lambda, const NoiseModel& noise,
                           std::optional<double> eta = std::nullopt, ShrinkOptions options = {});

/// U_Y diag(xi) V_Y^T.
Matrix reconstruct(const SingularSpectrum& y, const ShrinkageResult& shrinkage);

/// Full pipeline on an observation matrix (n <= m).
Matrix denoise(const Matrix& y, double lambda, const NoiseModel& noise,
               std::optional<double> eta = std::nullopt, ShrinkOptions options = {});

/// Solutions zeta_a, zeta_b of the resolvent relation at complex z.
struct ZetaPair {
  Complex z;
  Complex zeta_a;
  Complex zeta_b;
};

/// Uses M_Y(1/z^2) = z G(z) - 1 with G the resolvent of the symmetrised
/// spectrum, then Z = C((1/z^2) T(M)), zeta_a = z Z / (M + 1),
/// zeta_b = alpha z Z / (alpha M + 1).
ZetaPair zeta_star(Complex z, const SingularSpectrum& y, double alpha,
                   const RTransform& noise_rtransform);
ZetaPair zeta_star_from_resolvent(Complex z, Complex g, double alpha,
                                  const RTransform& noise_rtransform);

/// Rescaled overlap O(gamma, sigma) at z = gamma - i eta. `sigma` is a
/// singular value of the effective signal sqrt(lambda) S.
double overlap_theory(double gamma, double sigma, const SingularSpectrum& y, double alpha,
                      const RTransform& noise_rtransform, double eta);

/// One overlap curve against a fixed signal singular value.
struct OverlapCurve {
  Vector gamma;   // rank-binned, trial-averaged gamma
  double sigma = 0.0;
  Index sigma_index = 0;
  Vector values;  // rank-binned, trial-averaged N (u_i . s^l)(v_i . s^r)
  Vector std_error;  // standard error over trials of the binned value
};

struct OverlapOptions {
  Index trials = 1;
  std::vector<Index> sigma_indices;  // ranks j of the fixed signal (descending order)
  /// Consecutive ranks averaged into one point; must divide n.
  Index rank_bin = 1;
  std::uint64_t master_seed = 0;
  /// Worker threads (0: hardware concurrency capped by RRIE_THREADS).
  unsigned threads = 0;
};

/// Monte-Carlo overlaps for a fixed signal: trial t draws noise from stream
/// (master_seed, t), so results do not depend on the thread count.
std::vector<OverlapCurve> overlap_empirical(const Matrix& s_fixed, const NoiseModel& noise,
                                            const ChannelParams& params,
                                            const OverlapOptions& options);

void write_shrinkage_csv(std::ostream& out, const ShrinkageResult& shrinkage);
void write_overlap_csv(std::ostream& out, std::span<const OverlapCurve> curves);

}  // namespace rrie
