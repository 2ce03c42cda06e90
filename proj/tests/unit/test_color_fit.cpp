#include <doctest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "orbitcarve/carve/color_fit.hpp"
#include "orbitcarve/common/error.hpp"
#include "orbitcarve/synth/primitives.hpp"

using namespace orbitcarve;

namespace {

// Rings above and below the equator so every vertex of a convex shape is seen.
std::vector<Camera> two_ring_cameras(int size) {
  std::vector<Camera> cams;
  for (double elevation : {35.0, -35.0}) {
    OrbitRig rig = test::test_rig(8, size);
    rig.elevation_deg = elevation;
    rig.azimuth_start_deg = elevation > 0 ? 0.0 : 22.5;
    for (const Camera& c : build_orbit_cameras(rig)) cams.push_back(c);
  }
  return cams;
}

ViewTargets constant_color_targets(const TriMesh& mesh, const std::vector<Camera>& cams, const Vec3& color) {
  ViewTargets t = test::self_targets(mesh, cams);
  for (std::size_t v = 0; v < t.rgb.size(); ++v) {
    for (std::size_t i = 0; i < t.masks[v].pixel_count(); ++i) {
      t.rgb[v].set_pixel(i, t.masks[v][i] > 0.5 ? color : Vec3::Zero());
    }
  }
  return t;
}

}  // namespace

TEST_CASE("uniformly red views give red vertices") {
  TriMesh m = test::unit_sphere(2);
  transform_in_place(m, 0.8, Vec3::Zero());
  const ViewTargets t = constant_color_targets(m, two_ring_cameras(128), Vec3(1, 0, 0));
  ColorFitConfig cfg;
  cfg.render_size = 128;
  const ColorFitResult r = fit_colors(m, t, cfg);
  REQUIRE(r.mesh.colors.size() == m.vertices.size());
  double worst = 0.0;
  for (const Vec3& c : r.mesh.colors) worst = std::max(worst, (c - Vec3(1, 0, 0)).cwiseAbs().maxCoeff());
  MESSAGE("worst channel error " << worst * 255 << "/255");
  CHECK(worst <= 2.0 / 255.0);
  CHECK(r.mesh.vertices == m.vertices);
  CHECK(r.mesh.faces == m.faces);
}

TEST_CASE("hidden vertices keep the initial color") {
  TriMesh m = test::unit_sphere(2);
  transform_in_place(m, 0.8, Vec3::Zero());
  m.colors.clear();
  const auto n = static_cast<int>(m.vertices.size());
  // A small tetrahedron inside the sphere.
  m.vertices.insert(m.vertices.end(), {Vec3(0.1, 0.1, 0.1), Vec3(0.1, -0.1, -0.1), Vec3(-0.1, 0.1, -0.1),
                                       Vec3(-0.1, -0.1, 0.1)});
  m.faces.push_back({n, n + 1, n + 2});
  m.faces.push_back({n, n + 3, n + 1});
  m.faces.push_back({n, n + 2, n + 3});
  m.faces.push_back({n + 1, n + 3, n + 2});
  const ViewTargets t = constant_color_targets(m, two_ring_cameras(64), Vec3(0, 1, 0));
  ColorFitConfig cfg;
  cfg.iterations = 30;
  cfg.render_size = 64;
  const ColorFitResult r = fit_colors(m, t, cfg);
  for (int v = n; v < n + 4; ++v) CHECK(r.mesh.colors[v] == Vec3::Constant(0.5));
}

TEST_CASE("color loss never rises across a 10-iteration window") {
  TriMesh m = make_primitive(PrimitiveKind::sphere, 3);
  transform_in_place(m, 1.6, Vec3::Zero());
  const ViewTargets t = test::self_targets(m, build_orbit_cameras(test::test_rig(8, 96)));
  ColorFitConfig cfg;
  cfg.render_size = 96;
  TriMesh plain = m;
  plain.colors.clear();
  const ColorFitResult r = fit_colors(plain, t, cfg);
  REQUIRE(r.loss.size() == 200);
  REQUIRE(r.loss_unsquared.size() == 200);
  for (std::size_t i = 0; i + 10 < r.loss.size(); ++i) CHECK(r.loss[i + 10] <= r.loss[i]);
  CHECK(r.loss.back() < 0.05 * r.loss.front());
  for (const Vec3& c : r.mesh.colors) CHECK((c.minCoeff() >= 0.0 && c.maxCoeff() <= 1.0));
}

TEST_CASE("non-finite color targets abort with the view") {
  const TriMesh m = test::random_closed_mesh(1);
  ViewTargets t = test::self_targets(m, build_orbit_cameras(test::test_rig(3, 32)));
  for (std::size_t i = 0; i < t.masks[1].pixel_count(); ++i) {
    if (t.masks[1][i] > 0.5) {
      t.rgb[1].set_pixel(i, Vec3::Constant(std::numeric_limits<double>::infinity()));
      break;
    }
  }
  ColorFitConfig cfg;
  cfg.render_size = 32;
  try {
    fit_colors(m, t, cfg);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.iteration() == 1);
    CHECK(e.view() == 1);
  }
}

TEST_CASE("color config validation") {
  ColorFitConfig cfg;
  cfg.initial_color = 1.5;
  CHECK_THROWS_AS(cfg.validate(), InvariantError);
  cfg = ColorFitConfig{};
  cfg.lr_end = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvariantError);
}
