#include <benchmark/benchmark.h>

#include <cmath>

#include "profex/dpot.hpp"
#include "profex/husler_reiss.hpp"
#include "profex/hyperplane.hpp"
#include "profex/max_link.hpp"
#include "profex/tail_constructions.hpp"

using namespace profex;

namespace {

// Brownian-type variogram |i - j| / d on d sites.
GaussianProfileLaw chain_law(Eigen::Index d) {
  Matrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = std::abs(static_cast<double>(i - j)) / static_cast<double>(d);
  return GaussianProfileLaw::husler_reiss(Variogram(g));
}

void BM_ApplyProjector(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  const Matrix m = Matrix::Random(d, d);
  for (auto _ : state) benchmark::DoNotOptimize(apply_projector(m));
}
BENCHMARK(BM_ApplyProjector)->RangeMultiplier(4)->Range(4, 256);

void BM_SampleGaussianProfile(benchmark::State& state) {
  const auto law = chain_law(state.range(0));
  const std::size_t n = 10'000;
  for (auto _ : state) benchmark::DoNotOptimize(sample_gaussian_profile(law, n, 7));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_SampleGaussianProfile)->Arg(3)->Arg(10)->Arg(50);

void BM_MaxUFromMaxT(benchmark::State& state) {
  const double step = 1.0 / static_cast<double>(state.range(0));
  const auto cdf = TabulatedCDF::on_grid([](double s) { return 1.0 - std::exp(-s); }, step, 40.0);
  for (auto _ : state) benchmark::DoNotOptimize(maxu_cdf_from_maxt(cdf));
}
BENCHMARK(BM_MaxUFromMaxT)->Arg(100)->Arg(1000)->Arg(10000);

void BM_FitHR(benchmark::State& state) {
  const auto law = VectorLaw::gaussian(chain_law(state.range(0)));
  const auto data = sample_x_from_u(law, 20'000, 11).values;
  const auto exc = extract_exceedances(data, 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(fit_hr(exc));
}
BENCHMARK(BM_FitHR)->Arg(3)->Arg(10)->Arg(30);

void BM_RejectionUFromT(benchmark::State& state) {
  const auto law = VectorLaw::gaussian(chain_law(state.range(0)), LawRole::Generator);
  const std::size_t n = 10'000;
  for (auto _ : state) benchmark::DoNotOptimize(sample_u_from_t(law, n, 3));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_RejectionUFromT)->Arg(3)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
