#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "rrie/ensembles.hpp"
#include "rrie/error.hpp"
#include "rrie/mmse.hpp"
#include "rrie/rie.hpp"

namespace rrie {
namespace {

using std::numbers::pi;

struct Draw {
  Matrix s;
  Matrix y;
  SingularSpectrum spec;
};

Draw gaussian_draw(Index n, Index m, double lambda, std::uint64_t seed) {
  Rng r(seed);
  const auto p = ChannelParams::make(n, m, lambda);
  Draw d;
  d.s = sample_signal(SignalPrior::gaussian(), p, r);
  d.y = observe(d.s, NoiseModel::gaussian(p.alpha), p, r).y;
  d.spec = svd_spectrum(d.y, true);
  return d;
}

TEST(Identity, ScalesSingularValues) {
  const auto d = gaussian_draw(10, 12, 4.0, 1);
  const auto r = identity_shrink(d.spec, 4.0);
  EXPECT_EQ(r.xi, d.spec.values / 2.0);
  EXPECT_LT((reconstruct(d.spec, r) - d.y / 2.0).norm(), 1e-12);
  EXPECT_THROW(identity_shrink(d.spec, 0.0), InvalidArgument);
}

TEST(Oracle, MatchesSignalSvdExpansion) {
  // xi_i = sum_j sigma_j (u_i . s_j^l)(v_i . s_j^r).
  const auto d = gaussian_draw(15, 20, 1.0, 2);
  const auto sig = svd_spectrum(d.s, true);
  const auto r = oracle_singular_values(d.s, d.spec);
  for (Index i = 0; i < 15; ++i) {
    double expected = 0.0;
    for (Index j = 0; j < 15; ++j)
      expected += sig.values[j] * d.spec.left->col(i).dot(sig.left->col(j)) *
                  d.spec.right->col(i).dot(sig.right->col(j));
    EXPECT_NEAR(r.xi[i], expected, 1e-12);
  }
}

TEST(Oracle, MinimisesMseAmongRies) {
  const auto d = gaussian_draw(30, 30, 1.0, 3);
  const auto r = oracle_singular_values(d.s, d.spec);
  const double best = empirical_mse(d.s, reconstruct(d.spec, r));
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    ShrinkageResult q = r;
    for (Index i = 0; i < q.xi.size(); ++i) q.xi[i] += 0.05 * rng.normal();
    EXPECT_GT(empirical_mse(d.s, reconstruct(d.spec, q)), best);
  }
}

TEST(GaussianRie, MatchesClosedFormMse) {
  // Gaussian signal and noise: MSE -> 1 / (alpha (1 + lambda)).
  for (double lambda : {0.5, 2.0}) {
    const auto d = gaussian_draw(400, 400, lambda, 5);
    const auto r = rie_shrink(d.spec, lambda, NoiseModel::gaussian(1.0));
    EXPECT_EQ(r.method, ShrinkMethod::GaussianRie);
    EXPECT_NEAR(empirical_mse(d.s, reconstruct(d.spec, r)), 1.0 / (1.0 + lambda), 0.05 / (1.0 + lambda));
  }
}

TEST(GaussianRie, RectangularClosedForm) {
  const double lambda = 1.0;
  const auto d = gaussian_draw(200, 400, lambda, 6);
  const auto r = rie_shrink(d.spec, lambda, NoiseModel::gaussian(0.5));
  EXPECT_NEAR(empirical_mse(d.s, reconstruct(d.spec, r)), 2.0 / (1.0 + lambda), 0.1);
}

TEST(GeneralRie, ReducesToGaussianShrinker) {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const double alpha = t % 2 ? 1.0 : 0.25;
    const Index n = 20 + t;
    const auto m = static_cast<Index>(std::lround(n / alpha));
    const auto spec = svd_spectrum(sample_gaussian_matrix(n, m, rng.uniform(0.5, 2.0) / n, rng), true);
    const auto dens = eval_at_singular_values(spec, default_eta(spec));
    const double a = spec.alpha();
    const auto g = gaussian_rie_shrink(spec, 1.3, a, dens);
    const auto c = general_rie_shrink(spec, 1.3, a, [a](Complex z) { return z / a; }, dens);
    EXPECT_LT((g.xi - c.xi).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_EQ(g.edge, c.edge);
  }
}

TEST(GeneralRie, ZeroNoiseIsIdentity) {
  const auto d = gaussian_draw(25, 25, 1.0, 8);
  const auto dens = eval_at_singular_values(d.spec, default_eta(d.spec));
  const auto r = general_rie_shrink(d.spec, 2.0, 1.0, [](Complex) { return Complex(0.0); }, dens);
  EXPECT_LT((r.xi - d.spec.values / std::sqrt(2.0)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(GeneralRie, NeedsRTransform) {
  const auto d = gaussian_draw(5, 5, 1.0, 9);
  const auto dens = eval_at_singular_values(d.spec, 0.1);
  EXPECT_THROW(general_rie_shrink(d.spec, 1.0, 1.0, RTransform{}, dens), InvalidArgument);
}

TEST(Shrink, EdgeFlagsPassThrough) {
  const auto d = gaussian_draw(10, 10, 4.0, 17);
  auto dens = eval_at_singular_values(d.spec, default_eta(d.spec));
  dens.edge[0] = true;
  dens.edge[9] = true;
  for (const auto& r :
       {gaussian_rie_shrink(d.spec, 4.0, 1.0, dens),
        general_rie_shrink(d.spec, 4.0, 1.0, NoiseModel::uniform02(1.0).rtransform, dens)}) {
    EXPECT_EQ(r.xi[0], d.spec.values[0] / 2.0);
    EXPECT_EQ(r.xi[9], d.spec.values[9] / 2.0);
    EXPECT_EQ(r.edge_count(), 2);
  }
}

TEST(Shrink, SelfTermKeepsIsolatedValueOffTheFloor) {
  // The atom at the evaluation point contributes 1/(2 n pi eta) on its own.
  Vector v(5);
  v << 50.0, 1.0, 0.99, 0.98, 0.97;
  const double eta = 0.01;
  const auto p = eval_at_singular_values(spectrum_from_values(v, 5, 5), eta);
  EXPECT_GE(p.mu[0], 1.0 / (10.0 * pi * eta));
  EXPECT_FALSE(p.edge[0]);
}

TEST(Shrink, ClampOption) {
  const auto d = gaussian_draw(60, 60, 0.1, 10);
  const auto dens = eval_at_singular_values(d.spec, default_eta(d.spec));
  const auto raw = gaussian_rie_shrink(d.spec, 0.1, 1.0, dens);
  const auto clamped = gaussian_rie_shrink(d.spec, 0.1, 1.0, dens, {.clamp_nonnegative = true});
  EXPECT_GE(clamped.xi.minCoeff(), 0.0);
  EXPECT_EQ(clamped.xi, raw.xi.cwiseMax(0.0));
}

TEST(Shrink, RotationEquivariance) {
  Rng rng(11);
  const auto noise = NoiseModel::gaussian(0.8);
  for (int t = 0; t < 5; ++t) {
    const Matrix y = sample_gaussian_matrix(24, 30, 1.5 / 24, rng);
    const Matrix u = sample_haar_orthogonal(24, rng);
    const Matrix v = sample_haar_orthogonal(30, rng);
    const Matrix a = denoise(y, 1.0, noise);
    const Matrix b = denoise(u * y * v.transpose(), 1.0, noise);
    EXPECT_LT((b - u * a * v.transpose()).norm() / a.norm(), 1e-6);
  }
}

TEST(Shrink, MseExpansion) {
  // ||S - U diag(xi) V^T||^2 = ||S||^2 + ||xi||^2 - 2 sum xi_i u_i^T S v_i.
  Rng rng(12);
  const auto d = gaussian_draw(20, 35, 1.0, 13);
  ShrinkageResult r = identity_shrink(d.spec, 1.0);
  for (Index i = 0; i < r.xi.size(); ++i) r.xi[i] = rng.normal();
  const double cross = (d.spec.left->transpose() * d.s * *d.spec.right).diagonal().dot(r.xi);
  EXPECT_NEAR(empirical_mse(d.s, reconstruct(d.spec, r)),
              (d.s.squaredNorm() + r.xi.squaredNorm() - 2.0 * cross) / 20.0, 1e-8);
}

TEST(Zeta, HandComputedFromResolvent) {
  const double alpha = 0.5;
  const Complex z(1.1, -0.05);
  const Complex g(0.4, 0.6);
  const auto c = [alpha](Complex w) { return w / alpha; };
  const auto r = zeta_star_from_resolvent(z, g, alpha, c);
  const Complex m = z * g - 1.0;
  const Complex big_z = (alpha * m + 1.0) * (m + 1.0) / (z * z) / alpha;
  EXPECT_NEAR(std::abs(r.zeta_a - z * big_z / (m + 1.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(r.zeta_b - alpha * z * big_z / (alpha * m + 1.0)), 0.0, 1e-14);
}

TEST(Zeta, ZeroNoiseOverlapIsDeltaLike) {
  // With C = 0 the overlap reduces to Im[sigma / (z^2 - sigma^2)] / (pi mu).
  const auto d = gaussian_draw(50, 50, 1.0, 14);
  const double eta = 0.05;
  const double gamma = d.spec.values[10];
  const double sigma = 1.3;
  const Complex z(gamma, -eta);
  const double pi_mu = stieltjes_symmetrized(d.spec.values, z).imag();
  const double expected = (sigma / (z * z - sigma * sigma)).imag() / pi_mu;
  EXPECT_NEAR(overlap_theory(gamma, sigma, d.spec, 1.0, [](Complex) { return Complex(0.0); }, eta),
              expected, 1e-12 * std::abs(expected));
}

TEST(Overlap, DeterministicAcrossThreadCounts) {
  Rng rng(15);
  const auto p = ChannelParams::make(20, 40, 1.0);
  const Matrix s = sample_gaussian_matrix(20, 40, 1.0 / 20, rng);
  OverlapOptions o;
  o.trials = 4;
  o.sigma_indices = {3, 10};
  o.rank_bin = 5;
  o.master_seed = 9;
  o.threads = 1;
  const auto a = overlap_empirical(s, NoiseModel::gaussian(0.5), p, o);
  o.threads = 3;
  const auto b = overlap_empirical(s, NoiseModel::gaussian(0.5), p, o);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0].values.size(), 4);
  EXPECT_EQ(a[1].values, b[1].values);
  EXPECT_EQ(a[0].std_error, b[0].std_error);
  o.rank_bin = 3;
  EXPECT_THROW(overlap_empirical(s, NoiseModel::gaussian(0.5), p, o), InvalidArgument);
}

TEST(Csv, Headers) {
  const auto d = gaussian_draw(6, 6, 1.0, 16);
  std::stringstream a;
  write_shrinkage_csv(a, identity_shrink(d.spec, 1.0));
  std::string line;
  std::getline(a, line);
  EXPECT_EQ(line, "gamma,xi,flag");
  OverlapCurve c;
  c.gamma = Vector::Ones(2);
  c.values = Vector::Zero(2);
  c.std_error = Vector::Zero(2);
  std::stringstream b;
  write_overlap_csv(b, std::span<const OverlapCurve>(&c, 1));
  std::getline(b, line);
  EXPECT_EQ(line, "gamma,sigma,overlap");
}

}  // namespace
}  // namespace rrie
