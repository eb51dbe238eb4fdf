#include <benchmark/benchmark.h>

#include "rrie/ensembles.hpp"
#include "rrie/rie.hpp"
#include "rrie/spectral.hpp"

namespace {

using namespace rrie;

Matrix gaussian(Index n, Index m) {
  Rng r(1);
  return sample_gaussian_matrix(n, m, 1.0 / n, r);
}

void BM_Svd(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  const Matrix a = gaussian(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(svd_spectrum(a, state.range(1) != 0));
}
BENCHMARK(BM_Svd)->Args({200, 0})->Args({200, 1})->Args({500, 1})->Unit(benchmark::kMillisecond);

void BM_DensityAtSingularValues(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  const auto s = svd_spectrum(gaussian(n, n));
  const double eta = default_eta(s);
  for (auto _ : state) benchmark::DoNotOptimize(eval_at_singular_values(s, eta));
}
BENCHMARK(BM_DensityAtSingularValues)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_GridDensity(benchmark::State& state) {
  const auto s = svd_spectrum(gaussian(1000, 1000));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_density(s, Support::Symmetric));
}
BENCHMARK(BM_GridDensity)->Unit(benchmark::kMillisecond);

void BM_Shrink(benchmark::State& state) {
  const auto s = svd_spectrum(gaussian(500, 500), true);
  const auto gauss = NoiseModel::gaussian(1.0);
  const auto unif = NoiseModel::uniform02(1.0);
  const NoiseModel& noise = state.range(0) ? unif : gauss;
  for (auto _ : state) benchmark::DoNotOptimize(rie_shrink(s, 1.0, noise));
}
BENCHMARK(BM_Shrink)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
