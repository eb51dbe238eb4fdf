#include <gtest/gtest.h>

#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <sstream>

#include "densities.hpp"
#include "rrie/ensembles.hpp"
#include "rrie/error.hpp"
#include "rrie/spectral.hpp"

namespace rrie {
namespace {

using std::numbers::pi;

SingularSpectrum square_gaussian(Index n, std::uint64_t seed) {
  Rng r(seed);
  return svd_spectrum(sample_gaussian_matrix(n, n, 1.0 / n, r));
}

TEST(Svd, SortsDiagonal) {
  Matrix a = Matrix::Zero(3, 4);
  a(0, 0) = 3;
  a(1, 1) = 1;
  a(2, 2) = 2;
  const auto s = svd_spectrum(a);
  EXPECT_NEAR(s.values[0], 3.0, 1e-14);
  EXPECT_NEAR(s.values[1], 2.0, 1e-14);
  EXPECT_NEAR(s.values[2], 1.0, 1e-14);
}

TEST(Svd, ZeroMatrix) {
  EXPECT_TRUE(svd_spectrum(Matrix::Zero(4, 6)).values.isZero(0.0));
}

TEST(Svd, FrobeniusIdentity) {
  Rng r(1);
  const Matrix a = sample_gaussian_matrix(5, 8, 1.0, r);
  EXPECT_NEAR(svd_spectrum(a).values.squaredNorm(), a.squaredNorm(), 1e-10);
}

TEST(Svd, AgreesWithJacobiAndReconstructs) {
  Rng r(2);
  const Matrix a = sample_gaussian_matrix(17, 29, 1.0, r);
  const auto s = svd_spectrum(a, true);
  Eigen::JacobiSVD<Matrix> jac(a);
  EXPECT_LT((s.values - jac.singularValues()).cwiseAbs().maxCoeff(), 1e-12);
  ASSERT_TRUE(s.has_vectors());
  EXPECT_EQ(s.left->rows(), 17);
  EXPECT_EQ(s.right->rows(), 29);
  EXPECT_EQ(s.right->cols(), 17);
  const Matrix back = *s.left * s.values.asDiagonal() * s.right->transpose();
  EXPECT_LT((back - a).norm() / a.norm(), 1e-8);
  for (Index i = 1; i < s.values.size(); ++i) EXPECT_GE(s.values[i - 1], s.values[i]);
}

TEST(Svd, RotationInvariance) {
  Rng r(3);
  const Matrix a = sample_gaussian_matrix(10, 14, 1.0, r);
  const Matrix u = sample_haar_orthogonal(10, r);
  const Matrix v = sample_haar_orthogonal(14, r);
  EXPECT_LT((svd_spectrum(u * a * v.transpose()).values - svd_spectrum(a).values).cwiseAbs().maxCoeff(),
            1e-8);
}

TEST(Svd, Errors) {
  EXPECT_THROW(svd_spectrum(Matrix::Ones(5, 3)), InvalidArgument);
  Matrix bad = Matrix::Ones(2, 3);
  bad(1, 1) = std::nan("");
  EXPECT_THROW(svd_spectrum(bad), NumericalFailure);
}

TEST(Symmetrize, Examples) {
  Vector v(2);
  v << 2, 1;
  const Vector s = symmetrize(spectrum_from_values(v, 2, 2));
  ASSERT_EQ(s.size(), 4);
  EXPECT_EQ(s[0], -2);
  EXPECT_EQ(s[1], -1);
  EXPECT_EQ(s[2], 1);
  EXPECT_EQ(s[3], 2);
  EXPECT_EQ(s.sum(), 0.0);
  EXPECT_TRUE(symmetrize(spectrum_from_values(Vector::Zero(3), 3, 3)).isZero(0.0));
}

TEST(Stieltjes, SingleAtom) {
  // (1/2)[1/(-i-1) + 1/(-i+1)] = i/2 at x = 0, eta = 1.
  const double x = 0.0;
  const auto e = stieltjes_cauchy(spectrum_from_values(Vector::Ones(1), 1, 1), {&x, 1}, 1.0);
  const Complex direct = 0.5 * (1.0 / Complex(-1.0, -1.0) + 1.0 / Complex(1.0, -1.0));
  EXPECT_NEAR(e.g[0].imag(), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(e.g[0] - std::conj(-direct)), 0.0, 1e-15);
}

TEST(Stieltjes, FarFieldExpansion) {
  const auto s = square_gaussian(100, 4);
  const double x = 10.0 * s.max_value();
  const auto e = stieltjes_cauchy(s, {&x, 1}, 1e-3);
  const double m2 = s.values.squaredNorm() / 100.0;
  EXPECT_LT(std::abs(e.g[0] - 1.0 / x), 2.0 * m2 / (x * x * x) + 1e-3 / (x * x));
}

TEST(Stieltjes, ImaginaryPartPositive) {
  const auto s = square_gaussian(50, 5);
  const Vector grid = default_grid(s, Support::Symmetric, 101);
  const auto e = stieltjes_cauchy(s, {grid.data(), 101}, default_eta(s));
  for (Index i = 0; i < 101; ++i) EXPECT_GT(e.g[i].imag(), 0.0);
}

TEST(Stieltjes, MatchesComplexResolvent) {
  // Same kernel, two code paths; G(x - i eta) from the complex formula is
  // the conjugate of the sign convention used for the density.
  const auto s = square_gaussian(40, 6);
  const double eta = 0.07;
  const Vector grid = default_grid(s, Support::Symmetric, 33);
  const auto e = stieltjes_cauchy(s, {grid.data(), 33}, eta);
  for (Index i = 0; i < 33; ++i) {
    const Complex g = stieltjes_symmetrized(s.values, Complex(grid[i], -eta));
    EXPECT_NEAR(e.g[i].real(), g.real(), 1e-13);
    EXPECT_NEAR(e.g[i].imag(), g.imag(), 1e-13);
  }
}

TEST(Stieltjes, PlemeljConsistency) {
  const auto s = square_gaussian(40, 7);
  const Vector grid = default_grid(s, Support::Symmetric, 65);
  const auto e = stieltjes_cauchy(s, {grid.data(), 65}, 0.05);
  const auto d = density_and_hilbert(e, Support::Symmetric, false);
  for (Index i = 0; i < 65; ++i) {
    EXPECT_NEAR(pi * d.hilbert[i], e.g[i].real(), 1e-14);
    EXPECT_NEAR(pi * d.mu[i], e.g[i].imag(), 1e-14);
  }
}

TEST(Density, SemicircleAtOrigin) {
  const auto s = square_gaussian(2000, 8);
  const double x = 0.0;
  const auto e = stieltjes_cauchy(s, {&x, 1}, 0.05);
  EXPECT_NEAR(e.g[0].imag() / pi, 1.0 / pi, 0.05 / pi);
}

TEST(Density, SemicircleHilbert) {
  // pi H[mu_bar](x) = x / 2 inside the radius-2 semicircle.
  const auto s = square_gaussian(2000, 8);
  const Vector grid = testing::mirrored_grid(1.5, 61);
  const auto d = density_and_hilbert(stieltjes_cauchy(s, {grid.data(), 61}, 0.05), Support::Symmetric, false);
  for (Index i = 0; i < 61; ++i) EXPECT_NEAR(pi * d.hilbert[i], grid[i] / 2.0, 0.05);
}

TEST(Density, EvenAndOddOnMirroredGrid) {
  const auto s = square_gaussian(300, 9);
  const auto d = estimate_density(s, Support::Symmetric);
  const Index n = d.grid.size();
  for (Index i = 0; i < n; ++i) {
    EXPECT_EQ(d.grid[i], -d.grid[n - 1 - i]);
    EXPECT_NEAR(d.mu[i], d.mu[n - 1 - i], 1e-12);
    EXPECT_NEAR(d.hilbert[i], -d.hilbert[n - 1 - i], 1e-10);
  }
  const double zero = 0.0;
  const auto at0 = density_and_hilbert(stieltjes_cauchy(s, {&zero, 1}, default_eta(s)), Support::Symmetric, false);
  EXPECT_NEAR(at0.hilbert[0], 0.0, 1e-3);
}

TEST(Density, MassAndRenormalisation) {
  const auto s = square_gaussian(400, 10);
  const auto d = estimate_density(s, Support::Symmetric);
  EXPECT_GE(d.raw_mass, 0.98);
  EXPECT_LE(d.raw_mass, 1.02);
  EXPECT_NEAR(trapezoid(d.grid, d.mu), 1.0, 1e-12);
  EXPECT_EQ(d.clipped, 0);
  EXPECT_EQ(d.grid.size(), kDefaultGridPoints);
  EXPECT_NEAR(d.grid[d.grid.size() - 1], 1.05 * s.max_value(), 1e-12);

  const auto half = estimate_density(s, Support::NonNegative);
  EXPECT_EQ(half.grid[0], 0.0);
  EXPECT_NEAR(half.raw_mass, 1.0, 0.02);
}

TEST(Density, EdgeFlagsBelowFloor) {
  Vector v(3);
  v << 10.0, 1.0, 0.9;
  const auto s = spectrum_from_values(v, 3, 3);
  const auto d = estimate_density(s, Support::Symmetric, 211, 1e-3);  // spacing 0.1
  const double floor = kEdgeFloor * d.mu.maxCoeff();
  for (Index i = 0; i < d.mu.size(); ++i) EXPECT_EQ(d.edge[i], !(d.mu[i] > floor));
  EXPECT_TRUE(d.edge[157]);  // x = 5.2, between the atoms
  EXPECT_FALSE(d.edge[205]);  // x = 10
}

TEST(Density, DefaultEta) {
  Vector v(4);
  v << 2.0, 1.0, 0.5, 0.1;
  EXPECT_DOUBLE_EQ(default_eta(spectrum_from_values(v, 4, 4)), 0.5 / 2.0);
  EXPECT_DOUBLE_EQ(default_eta(spectrum_from_values(Vector::Zero(4), 4, 4)), 1e-3 / 2.0);
}

TEST(PointDensity, SingleValue) {
  const auto p = eval_at_singular_values(spectrum_from_values(Vector::Ones(1), 1, 1), 0.1);
  EXPECT_EQ(p.mu.size(), 1);
  EXPECT_EQ(p.hilbert.size(), 1);
}

TEST(PointDensity, MatchesInterpolatedGrid) {
  const auto s = square_gaussian(200, 11);
  const double eta = default_eta(s);
  const Vector grid = default_grid(s, Support::Symmetric, 8001);
  const auto d = density_and_hilbert(stieltjes_cauchy(s, {grid.data(), 8001}, eta),
                                     Support::Symmetric, false);
  const auto p = eval_at_singular_values(s, eta);
  const double dx = grid[1] - grid[0];
  for (Index i = 0; i < s.values.size(); ++i) {
    const double g = s.values[i];
    const auto k = static_cast<Index>(std::floor((g - grid[0]) / dx));
    const double t = (g - grid[k]) / dx;
    EXPECT_NEAR(p.mu[i], (1 - t) * d.mu[k] + t * d.mu[k + 1], 1e-3);
    EXPECT_NEAR(p.hilbert[i], (1 - t) * d.hilbert[k] + t * d.hilbert[k + 1], 1e-3);
  }
}

TEST(PointDensity, DuplicatesAgree) {
  Vector v(4);
  v << 1.5, 1.0, 1.0, 0.3;
  const auto p = eval_at_singular_values(spectrum_from_values(v, 4, 4), 0.2);
  EXPECT_EQ(p.mu[1], p.mu[2]);
  EXPECT_EQ(p.hilbert[1], p.hilbert[2]);
}

TEST(PointDensity, LeaveOneOutDropsSelfTerm) {
  Vector v(2);
  v << 1.0, 0.5;
  const double eta = 0.1;
  const auto p = eval_at_singular_values(spectrum_from_values(v, 2, 2), eta, true);
  // Remaining atoms at 1 are -1, 0.5, -0.5 with weight 1/3 each.
  double im = 0.0;
  for (double a : {-1.0, 0.5, -0.5}) im += eta / ((1.0 - a) * (1.0 - a) + eta * eta);
  EXPECT_NEAR(p.mu[0], im / 3.0 / pi, 1e-14);
}

TEST(Density, CsvHeader) {
  const auto d = estimate_density(square_gaussian(20, 12), Support::Symmetric, 11);
  std::stringstream out;
  write_density_csv(out, d);
  std::string line;
  std::getline(out, line);
  EXPECT_EQ(line, "x,mu,hilbert,flag");
  int rows = 0;
  while (std::getline(out, line)) ++rows;
  EXPECT_EQ(rows, 11);
}

}  // namespace
}  // namespace rrie
