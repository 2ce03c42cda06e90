#include <benchmark/benchmark.h>

#include "orbitcarve/init/marching_cubes.hpp"
#include "orbitcarve/init/scalar_grid.hpp"

using namespace orbitcarve;

namespace {

ScalarGrid ball_grid(int n) {
  const double spacing = 3.0 / (n - 1);
  ScalarGrid grid(n, Vec3::Constant(-1.5), spacing, 0.0);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) grid.at(i, j, k) = 1.0 - grid.node(i, j, k).squaredNorm();
    }
  }
  return grid;
}

void BM_MarchingCubes(benchmark::State& state) {
  const ScalarGrid grid = ball_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(marching_cubes(grid, 0.0));
}
BENCHMARK(BM_MarchingCubes)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
