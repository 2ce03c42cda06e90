#include <benchmark/benchmark.h>

#include "orbitcarve/metrics/bvh.hpp"
#include "orbitcarve/metrics/chamfer.hpp"
#include "orbitcarve/synth/primitives.hpp"

using namespace orbitcarve;

namespace {

void BM_Chamfer(benchmark::State& state) {
  const TriMesh a = make_primitive(PrimitiveKind::sphere, 5);
  const TriMesh b = make_primitive(PrimitiveKind::cube, 5);
  const auto samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(chamfer(a, b, samples, 1));
}
BENCHMARK(BM_Chamfer)->Arg(1000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_BvhBuild(benchmark::State& state) {
  const TriMesh m = make_primitive(PrimitiveKind::sphere, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(TriangleBvh(m));
}
BENCHMARK(BM_BvhBuild)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_BvhQuery(benchmark::State& state) {
  const TriMesh m = make_primitive(PrimitiveKind::torus, 5);
  const TriangleBvh bvh(m);
  const SurfaceSamples pts = sample_surface(make_primitive(PrimitiveKind::sphere, 3), 4096, 3);
  for (auto _ : state) {
    for (const Vec3& p : pts.points) benchmark::DoNotOptimize(bvh.closest(p));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(pts.points.size()));
}
BENCHMARK(BM_BvhQuery);

}  // namespace
