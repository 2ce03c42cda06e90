#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fixtures.hpp"
#include "orbitcarve/common/log.hpp"
#include "orbitcarve/common/random.hpp"
#include "orbitcarve/geometry/mesh.hpp"
#include "orbitcarve/synth/primitives.hpp"

using namespace orbitcarve;

namespace {

TriMesh regular_tetrahedron() {
  TriMesh m;
  m.vertices = {Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)};
  m.faces = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  return m;
}

TriMesh flat_square() {
  TriMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)};
  m.faces = {{0, 1, 2}, {0, 2, 3}};
  return m;
}

}  // namespace

TEST_CASE("tetrahedron vertex normals equal the normalized sum of incident face normals") {
  const TriMesh m = regular_tetrahedron();
  REQUIRE(signed_volume(m) > 0.0);
  const auto normals = vertex_normals(m);
  for (int v = 0; v < 4; ++v) {
    Vec3 sum = Vec3::Zero();
    for (const Face& f : m.faces) {
      if (std::find(f.begin(), f.end(), v) == f.end()) continue;
      const Vec3 n = (m.vertices[f[1]] - m.vertices[f[0]]).cross(m.vertices[f[2]] - m.vertices[f[0]]);
      sum += n.normalized();
    }
    CHECK((normals[v] - sum.normalized()).norm() < 1e-12);
    // Centered at the origin, so also radial.
    CHECK((normals[v] - m.vertices[v].normalized()).norm() < 1e-12);
  }
}

TEST_CASE("flat square normals are +z") {
  for (const Vec3& n : vertex_normals(flat_square())) CHECK((n - Vec3(0, 0, 1)).norm() < 1e-15);
}

TEST_CASE("icosphere level 3 normals are within 2 degrees of the sphere normal") {
  const TriMesh m = make_primitive(PrimitiveKind::sphere, 3);
  const auto normals = vertex_normals(m);
  double worst = 0.0;
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    const double c = std::clamp(normals[i].dot(m.vertices[i].normalized()), -1.0, 1.0);
    worst = std::max(worst, std::acos(c) * 180.0 / std::numbers::pi);
    CHECK(std::abs(normals[i].norm() - 1.0) < 1e-6);
  }
  CHECK(worst < 2.0);
}

TEST_CASE("isolated vertices get +z and a warning") {
  TriMesh m = flat_square();
  m.vertices.emplace_back(5, 5, 5);
  log::WarningCapture capture;
  const auto normals = vertex_normals(m);
  CHECK(normals[4] == Vec3(0, 0, 1));
  CHECK(capture.messages().size() == 1);
}

TEST_CASE("degenerate faces contribute nothing") {
  TriMesh m = flat_square();
  m.faces.push_back({0, 1, 1});
  for (const Vec3& n : vertex_normals(m)) CHECK((n - Vec3(0, 0, 1)).norm() < 1e-15);
}

TEST_CASE("mesh_stats on the unit cube") {
  const TriMesh cube = make_primitive(PrimitiveKind::cube, 0);
  const MeshStats s = mesh_stats(cube);
  CHECK(s.vertex_count == 8);
  CHECK(s.face_count == 12);
  CHECK(s.edge_count == 18);
  CHECK(s.euler_characteristic == 2);
  CHECK(s.total_area == doctest::Approx(6.0).epsilon(1e-12));
  CHECK((s.bbox.min - Vec3::Constant(-0.5)).norm() < 1e-15);
  CHECK((s.bbox.max - Vec3::Constant(0.5)).norm() < 1e-15);
}

TEST_CASE("mesh_stats on a torus and an icosahedron") {
  CHECK(mesh_stats(make_primitive(PrimitiveKind::torus, 2)).euler_characteristic == 0);
  const MeshStats ico = mesh_stats(make_primitive(PrimitiveKind::sphere, 0));
  CHECK(ico.vertex_count == 12);
  CHECK(ico.edge_count == 30);
  CHECK(ico.face_count == 20);
  CHECK(ico.euler_characteristic == 2);
}

TEST_CASE("Euler characteristic is invariant under vertex reordering") {
  const TriMesh m = make_primitive(PrimitiveKind::torus, 2);
  std::vector<int> perm(m.vertices.size());
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(7);
  std::shuffle(perm.begin(), perm.end(), rng);
  TriMesh p;
  p.vertices.resize(m.vertices.size());
  for (std::size_t i = 0; i < perm.size(); ++i) p.vertices[perm[i]] = m.vertices[i];
  for (const Face& f : m.faces) p.faces.push_back({perm[f[0]], perm[f[1]], perm[f[2]]});
  CHECK(mesh_stats(p).euler_characteristic == mesh_stats(m).euler_characteristic);
  CHECK(mesh_stats(p).edge_count == mesh_stats(m).edge_count);
}

TEST_CASE("topology queries") {
  const TriMesh sphere = make_primitive(PrimitiveKind::sphere, 2);
  CHECK(is_watertight(sphere));
  CHECK(signed_volume(sphere) > 0.0);
  CHECK_FALSE(is_watertight(flat_square()));
  CHECK(edge_topology(flat_square()).boundary_edges == 4);

  TriMesh flipped = sphere;
  std::swap(flipped.faces[0][1], flipped.faces[0][2]);
  CHECK(edge_topology(flipped).inconsistent_edges == 3);
  CHECK_FALSE(is_watertight(flipped));

  TriMesh fin = flat_square();
  fin.vertices.emplace_back(0.5, 0.5, 1.0);
  fin.faces.push_back({0, 2, 4});
  CHECK(edge_topology(fin).nonmanifold_edges == 1);
}

TEST_CASE("uv sphere fixture is a closed 200-face mesh") {
  const TriMesh m = test::random_closed_mesh(3);
  CHECK(m.faces.size() == 200);
  CHECK(m.vertices.size() == 102);
  CHECK(is_watertight(m));
  CHECK(mesh_stats(m).euler_characteristic == 2);
  CHECK(signed_volume(m) > 0.0);
}

TEST_CASE("validate rejects bad meshes") {
  TriMesh m = flat_square();
  m.faces.push_back({0, 1, 9});
  CHECK_THROWS(m.validate());
  TriMesh c = flat_square();
  c.colors.resize(2, Vec3::Zero());
  CHECK_THROWS(c.validate());
}
