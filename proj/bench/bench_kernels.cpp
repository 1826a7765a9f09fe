#include "helicoid/grid.hpp"
#include "helicoid/kernels.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace helicoid;

namespace {

ScalarField test_field(int n) {
  const WedgeGrid g(1, 256, 1.5707963267948966, 4 * n + 1, n + 1, RadialSpacing::geometric);
  return ScalarField::sample(g, [](double r, double t) { return t + std::cos(t) / r; });
}

void BM_residual_serial(benchmark::State& state) {
  const auto f = test_field(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const auto p = kernels::serial::polar_derivatives(f.grid(), f.values());
    const auto c = kernels::serial::cartesian_derivatives(f.grid(), p);
    benchmark::DoNotOptimize(kernels::serial::minimal_surface_residual(c));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size()));
}

void BM_residual_omp(benchmark::State& state) {
  const auto f = test_field(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const auto p = kernels::polar_derivatives(f.grid(), f.values());
    const auto c = kernels::cartesian_derivatives(f.grid(), p);
    benchmark::DoNotOptimize(kernels::minimal_surface_residual(c));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size()));
}

}  // namespace

BENCHMARK(BM_residual_serial)->RangeMultiplier(2)->Range(32, 512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_residual_omp)->RangeMultiplier(2)->Range(32, 512)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
