#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "rrie/types.hpp"

namespace rrie {

/// Singular values gamma_1 >= ... >= gamma_n >= 0 of an n x m matrix (n <= m),
/// optionally with the thin factors: left is n x n, right is m x n.
struct SingularSpectrum {
  Vector values;
  Index n = 0;
  Index m = 0;
  std::optional<Matrix> left;
  std::optional<Matrix> right;

  bool has_vectors() const noexcept { return left.has_value() && right.has_value(); }
  double alpha() const noexcept { return static_cast<double>(n) / static_cast<double>(m); }
  double max_value() const noexcept { return values.size() ? values.maxCoeff() : 0.0; }
};

/// Divide-and-conquer SVD (Eigen BDCSVD). Throws InvalidArgument when rows > cols and
/// NumericalFailure on non-finite input or non-convergence.
SingularSpectrum svd_spectrum(const Matrix& a, bool keep_vectors = false);

/// Spectrum of a known singular value list (no factors).
SingularSpectrum spectrum_from_values(Vector values, Index n, Index m);

/// The 2n signed atoms {+-gamma_i}, ascending.
Vector symmetrize(const SingularSpectrum& spectrum);

/// Cauchy-kernel resolvent of the symmetrised spectrum at x - i eta.
struct StieltjesEval {
  Vector points;
  double eta = 0.0;
  ComplexVector g;
};

/// Default bandwidth eta = max(gamma_max / 4, 1e-3) / sqrt(n).
double default_eta(const SingularSpectrum& spectrum);

/// G(x - i eta) = 1/(2n) sum_k [1/(x - i eta - gamma_k) + 1/(x - i eta + gamma_k)].
StieltjesEval stieltjes_cauchy(const SingularSpectrum& spectrum, std::span<const double> points,
                               double eta);

/// Resolvent of the symmetrised spectrum at an arbitrary complex point off
/// the real axis.
Complex stieltjes_symmetrized(const Vector& gamma, Complex z);

/// Which half of the spectrum a grid density describes.
///   Symmetric:   mu is the even density mu_bar on [-K, K].
///   NonNegative: mu is the unsymmetrised singular value density on [0, K],
///                i.e. 2 mu_bar restricted to x >= 0.
enum class Support { Symmetric, NonNegative };

/// Grid density with its Hilbert transform H[mu_bar].
struct DensityEstimate {
  Vector grid;
  Vector mu;
  Vector hilbert;
  std::vector<bool> edge;  // mu below the floor 1e-4 * max(mu)
  Support support = Support::Symmetric;
  double eta = 0.0;
  double raw_mass = 0.0;  // trapezoid mass before renormalisation
  Index clipped = 0;      // negative density values set to 0

  bool symmetrized() const noexcept { return support == Support::Symmetric; }
};

inline constexpr double kEdgeFloor = 1e-4;
inline constexpr Index kDefaultGridPoints = 512;

/// mu = Im G / pi (times 2 on the nonnegative half), H = Re G / pi.
/// With `renormalize`, mu and H are scaled together so mu integrates to 1.
DensityEstimate density_and_hilbert(const StieltjesEval& eval, Support support = Support::Symmetric,
                                    bool renormalize = true);

/// Uniform grid on [-1.05 gamma_max, 1.05 gamma_max] (exactly mirrored) or
/// on [0, 1.05 gamma_max].
Vector default_grid(const SingularSpectrum& spectrum, Support support,
                    Index points = kDefaultGridPoints);

DensityEstimate estimate_density(const SingularSpectrum& spectrum, Support support,
                                 Index points = kDefaultGridPoints,
                                 std::optional<double> eta = std::nullopt);

double trapezoid(const Vector& x, const Vector& y);

/// Density and Hilbert transform of mu_bar at each singular value, aligned
/// with spectrum.values.
struct PointDensity {
  Vector points;
  Vector mu;
  Vector hilbert;
  std::vector<bool> edge;
  double eta = 0.0;

  /// G at the point as pi (H + i mu).
  Complex resolvent(Index i) const;
};

/// With `leave_one_out` the atom +gamma_i is dropped when evaluating at
/// gamma_i (diagnostic only; normalisation 1/(2n - 1)).
PointDensity eval_at_singular_values(const SingularSpectrum& spectrum, double eta,
                                     bool leave_one_out = false);

/// CSV with header `x,mu,hilbert,flag`; flag is 1 for edge points.
void write_density_csv(std::ostream& out, const DensityEstimate& density);

}  // namespace rrie
