#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "orbitcarve/common/error.hpp"
#include "orbitcarve/common/random.hpp"
#include "orbitcarve/metrics/bvh.hpp"
#include "orbitcarve/synth/primitives.hpp"

using namespace orbitcarve;

TEST_CASE("point above a triangle interior") {
  const Vec3 q = closest_point_on_triangle(Vec3(0, 0, 1), Vec3(-1, -1, 0), Vec3(1, -1, 0), Vec3(0, 1, 0));
  CHECK(q == Vec3(0, 0, 0));
  CHECK((q - Vec3(0, 0, 1)).norm() == 1.0);
}

TEST_CASE("closest point in vertex and edge regions") {
  const Vec3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
  CHECK(closest_point_on_triangle(Vec3(-1, -1, 2), a, b, c) == a);
  CHECK(closest_point_on_triangle(Vec3(3, -1, 0), a, b, c) == b);
  CHECK(closest_point_on_triangle(Vec3(0.5, -2, 1), a, b, c) == Vec3(0.5, 0, 0));
  CHECK((closest_point_on_triangle(Vec3(1, 1, 0), a, b, c) - Vec3(0.5, 0.5, 0)).norm() < 1e-15);
  // Collinear corners reduce to a segment.
  CHECK(closest_point_on_triangle(Vec3(0.5, 1, 0), a, Vec3(0.5, 0, 0), b) == Vec3(0.5, 0, 0));
}

TEST_CASE("closest point matches dense barycentric search") {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    Vec3 v[3];
    for (Vec3& x : v) x = Vec3(uniform01(rng), uniform01(rng), uniform01(rng));
    const Vec3 p = 2.0 * Vec3(uniform01(rng), uniform01(rng), uniform01(rng)) - Vec3::Ones();
    const double exact = (closest_point_on_triangle(p, v[0], v[1], v[2]) - p).norm();
    double best = 1e9;
    const int n = 300;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; i + j <= n; ++j) {
        const Vec3 q = v[0] + (v[1] - v[0]) * (double(i) / n) + (v[2] - v[0]) * (double(j) / n);
        best = std::min(best, (q - p).norm());
      }
    }
    CHECK(exact <= best + 1e-12);
    CHECK(best - exact < 1e-2);
  }
}

TEST_CASE("BVH agrees with the brute-force scan") {
  const TriMesh m = make_primitive(PrimitiveKind::torus, 3);
  const TriangleBvh bvh(m);
  CHECK(bvh.face_count() == m.faces.size());
  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    const Vec3 p(uniform01(rng) - 0.5, uniform01(rng) - 0.5, uniform01(rng) - 0.5);
    const SurfaceHit a = bvh.closest(1.5 * p);
    const SurfaceHit b = closest_brute_force(m, 1.5 * p);
    CHECK(a.face == b.face);
    CHECK(a.distance_sq == b.distance_sq);
    CHECK(a.point == b.point);
  }
}

TEST_CASE("ties resolve to the lower face index") {
  // Two coincident triangles.
  TriMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  m.faces = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}};
  CHECK(TriangleBvh(m).closest(Vec3(0.2, 0.2, 1)).face == 0);
  CHECK(closest_brute_force(m, Vec3(0.2, 0.2, 1)).face == 0);
}

TEST_CASE("empty meshes are rejected") {
  CHECK_THROWS_AS(TriangleBvh(TriMesh{}), EmptyMeshError);
  CHECK_THROWS_AS(closest_brute_force(TriMesh{}, Vec3::Zero()), EmptyMeshError);
}
