#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "orbitcarve/common/error.hpp"
#include "orbitcarve/metrics/chamfer.hpp"
#include "orbitcarve/synth/primitives.hpp"

using namespace orbitcarve;

namespace {

TriMesh scaled_sphere(double radius) {
  TriMesh m = test::unit_sphere(5);
  transform_in_place(m, radius, Vec3::Zero());
  return m;
}

}  // namespace

TEST_CASE("identical meshes have zero distance") {
  const TriMesh m = make_primitive(PrimitiveKind::capsule, 3);
  const ChamferResult c = chamfer(m, m, 5000, 9);
  CHECK(c.mean < 1e-12);
  CHECK(c.rms < 1e-12);
  CHECK(c.samples == 5000);
  CHECK(c.seed == 9);
}

TEST_CASE("concentric spheres are 0.1 apart") {
  const ChamferResult c = chamfer(scaled_sphere(1.0), scaled_sphere(1.1), 20000, 1);
  CHECK(std::abs(c.mean - 0.1) < 0.01);
  CHECK(std::abs(c.mean_ab - 0.1) < 0.01);
  CHECK(std::abs(c.mean_ba - 0.1) < 0.01);
  CHECK(std::abs(c.rms - 0.1) < 0.01);
}

TEST_CASE("chamfer is symmetric under argument swap") {
  const TriMesh a = make_primitive(PrimitiveKind::torus, 2);
  const TriMesh b = make_primitive(PrimitiveKind::capsule, 2);
  const ChamferResult ab = chamfer(a, b, 3000, 4);
  const ChamferResult ba = chamfer(b, a, 3000, 4);
  CHECK(ab.mean == ba.mean);
  CHECK(ab.rms == ba.rms);
  CHECK(ab.mean_ab == ba.mean_ba);
  CHECK(ab.rms_ba == ba.rms_ab);
}

TEST_CASE("BVH chamfer equals the all-pairs loop on small instances") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const TriMesh a = make_primitive(PrimitiveKind::cube, 1);  // 48 faces
    TriMesh b = make_primitive(PrimitiveKind::sphere, 0);      // 20 faces
    transform_in_place(b, 1.3, Vec3(0.1, -0.05, 0.2));
    const ChamferResult fast = chamfer(a, b, 20, seed);
    const ChamferResult slow = chamfer_brute_force(a, b, 20, seed);
    CHECK(fast.mean == slow.mean);
    CHECK(fast.rms == slow.rms);
    CHECK(fast.mean_ab == slow.mean_ab);
    CHECK(fast.mean_ba == slow.mean_ba);
  }
}

TEST_CASE("samples lie on the surface and follow area") {
  TriMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(10, 0, 0), Vec3(13, 0, 0), Vec3(10, 3, 0)};
  m.faces = {{0, 1, 2}, {3, 4, 5}};
  const SurfaceSamples s = sample_surface(m, 10000, 2);
  int small = 0;
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    CHECK(s.points[i].z() == 0.0);
    if (s.faces[i] == 0) {
      ++small;
      CHECK(s.points[i].x() + s.points[i].y() <= 1.0 + 1e-12);
    }
  }
  // Area ratio 1 : 9.
  CHECK(std::abs(small / 10000.0 - 0.1) < 0.01);
  const SurfaceSamples again = sample_surface(m, 10000, 2);
  CHECK(again.points == s.points);
}

TEST_CASE("normal consistency") {
  const TriMesh m = scaled_sphere(1.0);
  CHECK(normal_consistency(m, m, 5000, 1) == doctest::Approx(1.0).epsilon(1e-6));
  TriMesh flipped = m;
  for (Face& f : flipped.faces) std::swap(f[1], f[2]);
  CHECK(normal_consistency(m, flipped, 5000, 1) == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(normal_consistency(m, scaled_sphere(1.05), 5000, 1) > 0.99);
}

TEST_CASE("zero-area and empty meshes are rejected") {
  TriMesh flat;
  flat.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)};
  flat.faces = {{0, 1, 2}};
  const TriMesh ok = make_primitive(PrimitiveKind::cube, 0);
  CHECK_THROWS_AS(chamfer(flat, ok, 10, 0), InvariantError);
  CHECK_THROWS_AS(normal_consistency(ok, flat, 10, 0), InvariantError);
  CHECK_THROWS(chamfer(TriMesh{}, ok, 10, 0));
}
