#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "orbitcarve/common/error.hpp"
#include "orbitcarve/geometry/mesh.hpp"
#include "orbitcarve/init/visual_hull.hpp"
#include "orbitcarve/raster/rasterizer.hpp"
#include "orbitcarve/synth/primitives.hpp"

using namespace orbitcarve;

namespace {

std::vector<MaskImage> hard_masks(const TriMesh& mesh, const std::vector<Camera>& cams) {
  std::vector<MaskImage> out;
  for (const ViewTargets t = test::self_targets(mesh, cams); const MaskImage& m : t.masks) out.push_back(m);
  return out;
}

double occupied_volume(const ScalarGrid& g) {
  return std::count_if(g.values.begin(), g.values.end(), [](double v) { return v > 0.5; }) *
         std::pow(g.spacing, 3);
}

}  // namespace

TEST_CASE("36-view hull of a sphere has the sphere's volume") {
  TriMesh sphere = test::unit_sphere(4);
  transform_in_place(sphere, 0.8, Vec3::Zero());
  OrbitRig rig = test::test_rig(36, 256);
  rig.elevation_deg = 0.0;
  const auto cams = build_orbit_cameras(rig);
  const ScalarGrid g = visual_hull(hard_masks(sphere, cams), cams, 96);
  const double exact = 4.0 / 3.0 * std::numbers::pi * std::pow(0.8, 3);
  CHECK(std::abs(occupied_volume(g) - exact) / exact < 0.05);
  CHECK(g.resolution == 96);
  CHECK((g.origin - Vec3::Constant(-1.0)).norm() < 1e-12);
  CHECK(g.node(95, 95, 95).isApprox(Vec3::Constant(1.0)));
}

TEST_CASE("one empty mask zeroes the hull") {
  const auto cams = build_orbit_cameras(test::test_rig(6, 64));
  auto masks = hard_masks(test::unit_sphere(2), cams);
  masks[3] = MaskImage(64, 64, 0.0);
  const ScalarGrid g = visual_hull(masks, cams, 32);
  CHECK(std::all_of(g.values.begin(), g.values.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("two orthogonal square silhouettes carve their frusta intersection") {
  OrbitRig rig;
  rig.views = 4;
  rig.radius = 4.0;
  rig.fov_y_deg = 40.0;
  rig.width = rig.height = 64;
  auto all = build_orbit_cameras(rig);
  const std::vector<Camera> cams = {all[0], all[1]};
  MaskImage square(64, 64, 0.0);
  for (int y = 20; y < 44; ++y) {
    for (int x = 20; x < 44; ++x) square.at(x, y) = 1.0;
  }
  const std::vector<MaskImage> masks = {square, square};
  const ScalarGrid g = visual_hull(masks, cams, 40);
  // Square covers pixel coordinates [20, 44]; one pixel of bilinear blur either side.
  auto inside_margin = [](double u) { return std::min(u - 20.0, 44.0 - u); };
  int checked = 0;
  for (int k = 0; k < g.resolution; ++k) {
    for (int j = 0; j < g.resolution; ++j) {
      for (int i = 0; i < g.resolution; ++i) {
        double margin = 1e9;
        for (const Camera& c : cams) {
          const Projection p = project(c, g.node(i, j, k));
          margin = std::min({margin, inside_margin(p.x), inside_margin(p.y)});
        }
        if (margin > 1.0) {
          CHECK(g.at(i, j, k) == 1.0);
          ++checked;
        } else if (margin < -1.0) {
          CHECK(g.at(i, j, k) == 0.0);
        }
      }
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("adding views never raises occupancy") {
  const TriMesh shape = make_primitive(PrimitiveKind::torus, 3);
  const auto cams = build_orbit_cameras(test::test_rig(8, 64));
  const auto masks = hard_masks(shape, cams);
  ScalarGrid previous;
  for (int n = 2; n <= 8; ++n) {
    const ScalarGrid g = visual_hull({masks.begin(), masks.begin() + n}, {cams.begin(), cams.begin() + n}, 24);
    if (n > 2) {
      for (std::size_t i = 0; i < g.values.size(); ++i) CHECK(g.values[i] <= previous.values[i]);
    }
    previous = g;
  }
}

TEST_CASE("hull mesh of a sphere is closed and near the surface") {
  TriMesh sphere = test::unit_sphere(4);
  transform_in_place(sphere, 0.8, Vec3::Zero());
  const auto cams = build_orbit_cameras(test::test_rig(12, 128));
  const TriMesh hull = visual_hull_mesh(hard_masks(sphere, cams), cams, 64);
  CHECK(is_watertight(hull));
  CHECK(mesh_stats(hull).euler_characteristic == 2);
  CHECK(signed_volume(hull) > 0.0);
  double worst = 0.0;
  for (const Vec3& v : hull.vertices) worst = std::max(worst, v.norm() - 0.8);
  CHECK(worst < 0.15);
}

TEST_CASE("hull input validation") {
  const auto cams = build_orbit_cameras(test::test_rig(3, 16));
  std::vector<MaskImage> masks(2, MaskImage(16, 16, 1.0));
  CHECK_THROWS_AS(visual_hull(masks, cams, 8), DimensionError);
  CHECK_THROWS_AS(visual_hull({masks[0]}, {cams[0]}, 8), DimensionError);
}
