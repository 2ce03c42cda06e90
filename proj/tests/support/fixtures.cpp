#include "fixtures.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "orbitcarve/common/random.hpp"
#include "orbitcarve/raster/rasterizer.hpp"
#include "orbitcarve/synth/primitives.hpp"

namespace orbitcarve::test {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const char* root = std::getenv("ORBITCARVE_TEST_TMP");
  const fs::path dir = (root && *root ? fs::path(root) : fs::temp_directory_path() / "orbitcarve-tests") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TriMesh unit_sphere(int subdivision) {
  TriMesh m = make_primitive(PrimitiveKind::sphere, subdivision);
  transform_in_place(m, 2.0, Vec3::Zero());
  return m;
}

TriMesh uv_sphere(int lon, int lat, double radius) {
  TriMesh m;
  m.vertices.emplace_back(0.0, radius, 0.0);
  for (int i = 1; i < lat; ++i) {
    const double theta = std::numbers::pi * i / lat;
    for (int j = 0; j < lon; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / lon;
      m.vertices.push_back(radius * Vec3(std::sin(theta) * std::sin(phi), std::cos(theta),
                                         std::sin(theta) * std::cos(phi)));
    }
  }
  m.vertices.emplace_back(0.0, -radius, 0.0);
  const int south = static_cast<int>(m.vertices.size()) - 1;
  auto id = [&](int i, int j) { return 1 + (i - 1) * lon + j % lon; };
  for (int j = 0; j < lon; ++j) m.faces.push_back({0, id(1, j), id(1, j + 1)});
  for (int i = 1; i < lat - 1; ++i) {
    for (int j = 0; j < lon; ++j) {
      m.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  for (int j = 0; j < lon; ++j) m.faces.push_back({south, id(lat - 1, j + 1), id(lat - 1, j)});
  return m;
}

TriMesh random_closed_mesh(std::uint64_t seed, double noise) {
  TriMesh m = uv_sphere(10, 11, 0.8);
  Rng rng(seed);
  for (Vec3& v : m.vertices) v *= 1.0 + noise * (2.0 * uniform01(rng) - 1.0);
  return m;
}

OrbitRig test_rig(int views, int size) {
  OrbitRig rig;
  rig.radius = 4.0;
  rig.fov_y_deg = 50.0;
  rig.elevation_deg = 20.0;
  rig.views = views;
  rig.width = size;
  rig.height = size;
  return rig;
}

ViewTargets self_targets(const TriMesh& mesh, const std::vector<Camera>& cameras) {
  RasterConfig hard;
  hard.mode = RasterMode::hard;
  ViewTargets t;
  for (const Camera& c : cameras) {
    RenderOutput r = render(mesh, c, hard);
    t.cameras.push_back(c);
    t.masks.push_back(std::move(r.mask));
    t.normals.push_back(std::move(r.normal));
    t.rgb.push_back(std::move(r.color));
  }
  return t;
}

}  // namespace orbitcarve::test
