#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "densities.hpp"
#include "rrie/ensembles.hpp"
#include "rrie/error.hpp"
#include "rrie/mmse.hpp"

namespace rrie {
namespace {

using std::numbers::pi;

double sc2(double x) { return testing::semicircle_density(x, 2.0); }
double sc2_h(double x) { return testing::semicircle_hilbert(x, 2.0); }
double bumps(double x) {
  return 0.5 * (testing::semicircle_density(x, 1.0, -2.0) + testing::semicircle_density(x, 1.0, 2.0));
}
double bumps_h(double x) {
  return 0.5 * (testing::semicircle_hilbert(x, 1.0, -2.0) + testing::semicircle_hilbert(x, 1.0, 2.0));
}

TEST(EmpiricalMse, Basics) {
  const Matrix a = Matrix::Ones(2, 3);
  EXPECT_DOUBLE_EQ(empirical_mse(a, Matrix::Zero(2, 3)), 3.0);
  EXPECT_THROW(empirical_mse(a, Matrix::Zero(3, 2)), InvalidArgument);
  EXPECT_DOUBLE_EQ(normalized_mse(0.4, 0.8), 0.5);
  EXPECT_DOUBLE_EQ(mmse_general(1.0, Vector::Zero(4)), 1.0);
  Vector xi(2);
  xi << 1.0, 0.0;
  EXPECT_DOUBLE_EQ(mmse_general(1.0, xi), 0.5);
}

TEST(HilbertIdentities, SemicircleCubicAndMoment) {
  const auto f = testing::tabulate(testing::mirrored_grid(2.2, 1024), sc2, sc2_h);
  const auto r = hilbert_identity_suite(f);
  EXPECT_LT(std::abs(r.cubic), 1e-3);
  EXPECT_LT(std::abs(r.moment), 1e-3);
}

TEST(HilbertIdentities, InverseIdentityCarriesOriginTerm) {
  // For a density positive at 0, int (H/x) f picks up (pi/2) f(0)^2; for the
  // radius-2 semicircle that is 1/(2 pi).
  const auto f = testing::tabulate(testing::mirrored_grid(2.2, 1024), sc2, sc2_h);
  const auto r = hilbert_identity_suite(f);
  EXPECT_NEAR(r.origin_term, 1.0 / (2.0 * pi), 1e-5);
  EXPECT_NEAR(r.inverse, r.origin_term, 1e-3);
}

TEST(HilbertIdentities, AllHoldWhenDensityVanishesAtOrigin) {
  const auto f = testing::tabulate(testing::mirrored_grid(3.2, 4096), bumps, bumps_h);
  const auto r = hilbert_identity_suite(f);
  EXPECT_LT(std::abs(r.cubic), 1e-3);
  EXPECT_LT(std::abs(r.moment), 1e-3);
  EXPECT_LT(std::abs(r.inverse), 1e-3);
  EXPECT_EQ(r.origin_term, 0.0);
}

TEST(HilbertIdentities, NeedsMirroredGrid) {
  Vector x(4);
  x << -1.0, 0.0, 0.5, 1.0;
  auto f = testing::tabulate(x, sc2, sc2_h);
  EXPECT_THROW(hilbert_identity_suite(f), InvalidArgument);
}

DensityEstimate observed_half_density(Index n, Index m, double lambda, std::uint64_t seed) {
  Rng r(seed);
  const auto p = ChannelParams::make(n, m, lambda);
  const auto s = sample_signal(SignalPrior::gaussian(), p, r);
  const auto y = observe(s, NoiseModel::gaussian(p.alpha), p, r).y;
  return estimate_density(svd_spectrum(y), Support::NonNegative, 2048);
}

TEST(MmseGaussian, SquareClosedForm) {
  for (double lambda : {1.0, 4.0}) {
    const auto rep = mmse_gaussian(observed_half_density(1000, 1000, lambda, 3), lambda, 1.0);
    EXPECT_NEAR(rep.theory_mmse, 1.0 / (1.0 + lambda), 0.03);
    EXPECT_TRUE(rep.within_bounds());
    EXPECT_FALSE(rep.inverse_moment_divergent);
    EXPECT_NEAR(rep.second_moment_s, 1.0, 0.05);
  }
}

TEST(MmseGaussian, RectangularClosedForm) {
  // alpha = 1/2: 1 / (alpha (1 + lambda)).
  Rng r(4);
  const auto p = ChannelParams::make(400, 800, 1.0);
  const auto s = sample_signal(SignalPrior::gaussian(), p, r);
  const auto y = svd_spectrum(observe(s, NoiseModel::gaussian(p.alpha), p, r).y);
  const auto rep = mmse_gaussian(y, 1.0);
  EXPECT_FALSE(rep.inverse_moment_divergent);
  EXPECT_NEAR(rep.int_mu_over_x2, (y.values.array().square().inverse()).mean(), 1e-15);
  EXPECT_NEAR(rep.theory_mmse, 1.0, 0.05);
  EXPECT_NEAR(rep.second_moment_s, s.squaredNorm() / 400.0, 0.1);
}

TEST(MmseGaussian, SpectrumAndDensityFormsAgreeForSquare) {
  Rng r(6);
  const auto p = ChannelParams::make(500, 500, 2.0);
  const auto s = sample_signal(SignalPrior::gaussian(), p, r);
  const auto y = svd_spectrum(observe(s, NoiseModel::gaussian(1.0), p, r).y);
  const auto a = mmse_gaussian(y, 2.0);
  const auto b = mmse_gaussian(estimate_density(y, Support::NonNegative, 2048), 2.0, 1.0);
  EXPECT_NEAR(a.theory_mmse, b.theory_mmse, 1e-9);
}

TEST(MmseGaussian, DensityFormFlagsCutoffDominatedInverseMoment) {
  const auto half = observed_half_density(200, 400, 1.0, 4);
  EXPECT_TRUE(mmse_gaussian(half, 1.0, 0.5).inverse_moment_divergent);
}

TEST(MmseGaussian, RejectsSymmetricDensity) {
  Rng r(5);
  const auto s = svd_spectrum(sample_gaussian_matrix(20, 20, 0.05, r));
  EXPECT_THROW(mmse_gaussian(estimate_density(s, Support::Symmetric), 1.0, 1.0), InvalidArgument);
}

TEST(MutualInformation, IMmseClosedForm) {
  std::vector<MmseSample> samples;
  for (int i = 0; i <= 300; ++i) samples.push_back({0.01 * i, 1.0 / (1.0 + 0.01 * i)});
  const auto mi = mutual_information_curve(samples, 1.0);
  ASSERT_EQ(mi.size(), samples.size());
  EXPECT_EQ(mi[0].mi, 0.0);
  for (const auto& s : mi) EXPECT_NEAR(s.mi, 0.5 * std::log1p(s.lambda), 1e-5);
}

TEST(MutualInformation, GridPreconditions) {
  std::vector<MmseSample> bad = {{0.1, 1.0}, {0.2, 0.9}};
  EXPECT_THROW(mutual_information_curve(bad, 1.0), InvalidArgument);
  std::vector<MmseSample> flat = {{0.0, 1.0}, {0.0, 0.9}};
  EXPECT_THROW(mutual_information_curve(flat, 1.0), InvalidArgument);
}

TEST(MmseCsv, Header) {
  MmseReport rep;
  std::stringstream out;
  write_mmse_csv(out, std::span<const MmseReport>(&rep, 1));
  std::string line;
  std::getline(out, line);
  EXPECT_EQ(line, "lambda,alpha,theory_mmse,empirical_mse,stderr,int_mu_over_x2,int_mu_cubed");
}

}  // namespace
}  // namespace rrie
