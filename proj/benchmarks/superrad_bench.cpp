#include <memory>

#include <benchmark/benchmark.h>

#include "superrad/dynamics.hpp"
#include "superrad/field.hpp"
#include "superrad/kernel.hpp"
#include "superrad/quadrature.hpp"

using namespace superrad;

namespace {

// 7x7xL lattice with L from the first argument.
SampleGeometry lattice(const benchmark::State& state) {
  return build_lattice({7, 7, static_cast<int>(state.range(0))}, 0.37);
}

std::shared_ptr<const AngularGrid> grid(const SampleGeometry& s, int n) {
  return std::make_shared<const AngularGrid>(build_angular_grid(n, n, s.k0_direction(), 0.3));
}

void BM_BuildKernel(benchmark::State& state) {
  const auto s = lattice(state);
  for (auto _ : state) benchmark::DoNotOptimize(build_kernel(s));
  state.counters["atoms"] = static_cast<double>(s.size());
}
BENCHMARK(BM_BuildKernel)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Diagonalize(benchmark::State& state) {
  const auto k = build_kernel(lattice(state));
  for (auto _ : state) benchmark::DoNotOptimize(diagonalize(k));
  state.counters["atoms"] = static_cast<double>(k.size());
}
BENCHMARK(BM_Diagonalize)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Propagate(benchmark::State& state) {
  const auto e = diagonalize(build_kernel(lattice(state)));
  for (auto _ : state) benchmark::DoNotOptimize(propagate(e, 0.05, 18.5));
}
BENCHMARK(BM_Propagate)->Arg(20)->Unit(benchmark::kMicrosecond);

void BM_ModeProjection(benchmark::State& state) {
  const auto s = lattice(state);
  const auto e = diagonalize(build_kernel(s));
  const auto g = grid(s, static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(mode_projection(s, e, g));
}
BENCHMARK(BM_ModeProjection)
    ->Args({10, 32})
    ->Args({20, 64})
    ->Unit(benchmark::kMillisecond);

void BM_AngularDensity(benchmark::State& state) {
  const auto s = lattice(state);
  const auto e = diagonalize(build_kernel(s));
  const auto modes = mode_projection(s, e, grid(s, static_cast<int>(state.range(1))));
  for (auto _ : state) benchmark::DoNotOptimize(angular_density(modes, kInfiniteTime));
}
BENCHMARK(BM_AngularDensity)
    ->Args({10, 32})
    ->Args({20, 64})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
