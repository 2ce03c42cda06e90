#include <benchmark/benchmark.h>

#include "orbitcarve/init/orbit.hpp"
#include "orbitcarve/raster/rasterizer.hpp"
#include "orbitcarve/synth/primitives.hpp"

using namespace orbitcarve;

namespace {

Camera bench_camera(int size) {
  OrbitRig rig;
  rig.radius = 4.0;
  rig.fov_y_deg = 50.0;
  rig.elevation_deg = 20.0;
  rig.views = 1;
  rig.width = size;
  rig.height = size;
  return build_orbit_cameras(rig).front();
}

TriMesh bench_sphere(int subdivision) {
  TriMesh m = make_primitive(PrimitiveKind::sphere, subdivision);
  transform_in_place(m, 2.0, Vec3::Zero());
  return m;
}

void BM_RenderSoft(benchmark::State& state) {
  const TriMesh mesh = bench_sphere(static_cast<int>(state.range(0)));
  const Camera cam = bench_camera(static_cast<int>(state.range(1)));
  const RasterConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(render(mesh, cam, cfg));
  state.counters["faces"] = static_cast<double>(mesh.faces.size());
}
BENCHMARK(BM_RenderSoft)->Args({3, 256})->Args({5, 256})->Args({5, 512})->Unit(benchmark::kMillisecond);

void BM_RenderHard(benchmark::State& state) {
  const TriMesh mesh = bench_sphere(static_cast<int>(state.range(0)));
  const Camera cam = bench_camera(256);
  RasterConfig cfg;
  cfg.mode = RasterMode::hard;
  for (auto _ : state) benchmark::DoNotOptimize(render(mesh, cam, cfg));
}
BENCHMARK(BM_RenderHard)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_RenderBackward(benchmark::State& state) {
  const TriMesh mesh = bench_sphere(static_cast<int>(state.range(0)));
  const Camera cam = bench_camera(256);
  const RasterConfig cfg;
  const std::vector<MeshEdge> edges = mesh_edges(mesh);
  const RenderOutput fwd = render(mesh, cam, cfg, edges);
  UpstreamGradients up;
  up.mask = MaskImage(256, 256, 1.0);
  up.normal = NormalImage(256, 256, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(render_backward(mesh, cam, cfg, edges, fwd, up));
}
BENCHMARK(BM_RenderBackward)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace
