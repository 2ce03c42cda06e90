#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "orbitcarve/carve/remesh.hpp"
#include "orbitcarve/geometry/mesh.hpp"
#include "orbitcarve/synth/primitives.hpp"

using namespace orbitcarve;

namespace {

double mean_edge(const TriMesh& m) {
  double s = 0.0;
  const auto edges = mesh_edges(m);
  for (const MeshEdge& e : edges) s += (m.vertices[e.a] - m.vertices[e.b]).norm();
  return s / edges.size();
}

double fraction_within(const TriMesh& m, double target, double lo, double hi) {
  int n = 0;
  int ok = 0;
  for (const MeshEdge& e : mesh_edges(m)) {
    const double len = (m.vertices[e.a] - m.vertices[e.b]).norm();
    ++n;
    ok += len >= lo * target && len <= hi * target;
  }
  return static_cast<double>(ok) / n;
}

double min_area(const TriMesh& m) {
  double a = 1e9;
  for (std::size_t f = 0; f < m.faces.size(); ++f) a = std::min(a, 0.5 * face_area_vector(m, f).norm());
  return a;
}

}  // namespace

TEST_CASE("a mesh already at the target edge is left alone") {
  const TriMesh ico = make_primitive(PrimitiveKind::sphere, 0);
  const RemeshResult r = remesh(ico, mean_edge(ico), 0.0);
  CHECK(r.stats.splits == 0);
  CHECK(r.stats.collapses == 0);
  CHECK(r.stats.flips == 0);
  CHECK(r.mesh.faces == ico.faces);
  CHECK(r.mesh.vertices == ico.vertices);
}

TEST_CASE("one edge at twice the target splits once") {
  TriMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(1, 0.85, 0), Vec3(1, -0.85, 0)};
  m.faces = {{0, 1, 2}, {1, 0, 3}};
  const RemeshResult r = remesh(m, 1.0, 0.0);
  CHECK(r.stats.splits == 1);
  CHECK(r.stats.collapses == 0);
  CHECK(r.mesh.vertices.size() == 5);
  CHECK(r.mesh.faces.size() == 4);
  CHECK(std::find(r.mesh.vertices.begin(), r.mesh.vertices.end(), Vec3(1, 0, 0)) != r.mesh.vertices.end());
}

TEST_CASE("three passes at target 0.02 equalize an icosphere") {
  TriMesh m = make_primitive(PrimitiveKind::sphere, 3);
  const double target = 0.02;
  for (int pass = 0; pass < 3; ++pass) m = remesh(m, target, 0.1).mesh;
  CHECK(fraction_within(m, target, 0.5, 1.5) >= 0.9);
  CHECK(is_watertight(m));
  CHECK(mesh_stats(m).euler_characteristic == 2);
  CHECK(min_area(m) >= 1e-12);
  CHECK(signed_volume(m) > 0.0);
}

TEST_CASE("remesh keeps the torus genus") {
  TriMesh m = make_primitive(PrimitiveKind::torus, 2);
  for (int pass = 0; pass < 3; ++pass) m = remesh(m, 0.03, 0.1).mesh;
  CHECK(is_watertight(m));
  CHECK(mesh_stats(m).euler_characteristic == 0);
}

TEST_CASE("coarsening collapses and keeps the surface closed") {
  const TriMesh fine = make_primitive(PrimitiveKind::sphere, 4);
  const RemeshResult r = remesh(fine, 0.08, 0.0);
  CHECK(r.stats.collapses > 0);
  CHECK(r.mesh.vertices.size() < fine.vertices.size());
  CHECK(is_watertight(r.mesh));
  CHECK(mesh_stats(r.mesh).euler_characteristic == 2);
}

TEST_CASE("vertex sources are convex combinations of input vertices") {
  const TriMesh m = test::random_closed_mesh(2);
  const RemeshResult r = remesh(m, 0.12, 0.1);
  REQUIRE(r.sources.size() == r.mesh.vertices.size());
  for (const VertexSources& s : r.sources) {
    REQUIRE_FALSE(s.empty());
    double total = 0.0;
    for (const auto& [v, w] : s) {
      CHECK(v >= 0);
      CHECK(v < static_cast<int>(m.vertices.size()));
      CHECK(w > 0.0);
      total += w;
    }
    CHECK(total == doctest::Approx(1.0));
  }
}

TEST_CASE("boundary edges are locked") {
  TriMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(3, 0, 0), Vec3(0, 3, 0)};
  m.faces = {{0, 1, 2}};
  const RemeshResult r = remesh(m, 0.5, 0.5);
  CHECK(r.stats.locked_edges == 3);
  CHECK(r.mesh.vertices == m.vertices);
  CHECK(r.mesh.faces == m.faces);
}
