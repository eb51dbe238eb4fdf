#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "rrie/spectral.hpp"
#include "rrie/types.hpp"

namespace rrie {

/// (1/N) ||S - S_hat||_F^2 with N the row count.
double empirical_mse(const Matrix& s, const Matrix& s_hat);

/// MSE divided by the signal's second moment (e.g. 1 - p for sparse priors).
double normalized_mse(double mse, double signal_second_moment);

/// int x^2 mu_S - (1/N) sum xi_i^2.
double mmse_general(double second_moment_s, const Vector& xi_star);

struct MmseReport {
  double lambda = 0.0;
  double alpha = 1.0;
  double theory_mmse = 0.0;
  std::optional<double> empirical_mse;
  std::optional<double> std_error;
  /// Implied by the observed second moment: (int x^2 mu_Y - 1/alpha) / lambda.
  double second_moment_s = 0.0;
  double int_mu_over_x2 = 0.0;  // 0 and unevaluated when alpha = 1
  double int_mu_cubed = 0.0;
  /// Lower cutoff used for int mu / x^2 (first grid point above the floor).
  double x_min = 0.0;
  /// Set when alpha < 1 and the density does not vanish near 0, so the
  /// inverse-moment integral is cutoff dominated.
  bool inverse_moment_divergent = false;

  bool within_bounds() const;
};

/// Gaussian-noise asymptotic MMSE from the unsymmetrised density of Y:
/// (1/lambda) [1/alpha - (1/alpha - 1)^2 int mu/x^2 - (pi^2/3) int mu^3].
/// For alpha < 1 the smoothed density has Cauchy tails reaching the origin,
/// so int mu/x^2 depends on the cutoff; prefer the spectrum overload there.
MmseReport mmse_gaussian(const DensityEstimate& half_density, double lambda, double alpha);

/// Same formula from an observed spectrum: int mu/x^2 and the second moment
/// are averages over the singular values, int mu^3 uses the smoothed
/// density on a `grid_points` grid.
MmseReport mmse_gaussian(const SingularSpectrum& y, double lambda,
                         Index grid_points = 2048, std::optional<double> eta = std::nullopt);

/// Residuals of three Hilbert-transform identities for a density f:
///   cubic:   int f H[f]^2 - (1/3) int f^3
///   moment:  int x f H[f] - (1/2 pi) (int f)^2
///   inverse: int (H[f]/x) f + (1/2 pi) (p.v. int f/x)^2
/// The inverse identity needs f to vanish at the origin; otherwise its left
/// side carries an extra (pi/2) f(0)^2, reported as `origin_term`.
struct HilbertIdentityResiduals {
  double cubic = 0.0;
  double moment = 0.0;
  double inverse = 0.0;
  double origin_term = 0.0;
};

/// `f` must be on a mirrored grid (x_i = -x_{n-1-i}).
HilbertIdentityResiduals hilbert_identity_suite(const DensityEstimate& f);

struct MmseSample {
  double lambda = 0.0;
  double mmse = 0.0;
};

struct MiSample {
  double lambda = 0.0;
  double mi = 0.0;  // (1/MN) I(S; Y)
};

/// I-MMSE: (1/MN) I(lambda) = (alpha/2) int_0^lambda MMSE, trapezoid rule.
/// The grid must start at lambda = 0 and increase strictly.
std::vector<MiSample> mutual_information_curve(std::span<const MmseSample> samples, double alpha);

/// CSV rows `lambda,alpha,theory_mmse,empirical_mse,stderr,int_mu_over_x2,int_mu_cubed`.
void write_mmse_csv(std::ostream& out, std::span<const MmseReport> rows);

}  // namespace rrie
