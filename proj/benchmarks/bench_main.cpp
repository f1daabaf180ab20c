#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "curvfam/familygen.hpp"
#include "curvfam/fungrid.hpp"
#include "curvfam/polyline.hpp"
#include "curvfam/smoothcurve.hpp"

namespace {

using namespace curvfam;

void BM_Integrate(benchmark::State& state) {
  const UniformGrid grid(static_cast<std::size_t>(state.range(0)));
  const auto f = SampledFunction::sample(grid, [](double t) { return std::exp(std::cos(t)) * t; });
  for (auto _ : state) benchmark::DoNotOptimize(integrate(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Integrate)->RangeMultiplier(4)->Range(256, 65536)->Complexity();

void BM_FamilyScan(benchmark::State& state) {
  const UniformGrid grid(static_cast<std::size_t>(state.range(0)));
  const auto k = SampledFunction::constant(grid, 1.0);
  const auto f = SampledFunction::sample(grid, [](double s) { return -2.0 * std::sin(2.0 * s); }, true);
  const auto lambdas = default_lambda_grid();
  for (auto _ : state) benchmark::DoNotOptimize(family_scan(k, f, lambdas, 1e-9));
}
BENCHMARK(BM_FamilyScan)->Arg(1024)->Arg(4096)->Arg(16384);

// Regular 22-gon: 20 interior vertices, 2^20 subsets.
void BM_BalancedSubsets(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  std::vector<double> k(m, 2.0 * std::numbers::pi / static_cast<double>(m + 2));
  const auto angles = DiscreteAngles::from_curvature(k);
  for (auto _ : state) benchmark::DoNotOptimize(find_balanced_subsets(angles));
}
BENCHMARK(BM_BalancedSubsets)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_BuildPair(benchmark::State& state) {
  const auto curve = make_gapped_curve(3, 4, 7);
  const auto g = Generator::parse("exp+2x");
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const auto map = arclength_map(curve, n);
    benchmark::DoNotOptimize(build_pair(curve, map, 4, g));
  }
}
BENCHMARK(BM_BuildPair)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
