#include <doctest.h>

#include "orbitcarve/common/error.hpp"
#include "orbitcarve/geometry/mesh.hpp"
#include "orbitcarve/synth/primitives.hpp"

using namespace orbitcarve;

TEST_CASE("icosphere level 3") {
  const TriMesh m = make_primitive(PrimitiveKind::sphere, 3);
  CHECK(m.vertices.size() == 10 * 64 + 2);
  CHECK(mesh_stats(m).euler_characteristic == 2);
  for (const Vec3& v : m.vertices) CHECK(v.norm() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sphere colors split at x = 0") {
  const TriMesh m = make_primitive(PrimitiveKind::sphere, 2);
  Vec3 east(-1, -1, -1);
  Vec3 west(-1, -1, -1);
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    Vec3& ref = m.vertices[i].x() >= 0.0 ? east : west;
    if (ref.x() < 0.0) ref = m.colors[i];
    CHECK(m.colors[i] == ref);
  }
  CHECK(east != west);
}

TEST_CASE("cube level 0") {
  const TriMesh m = make_primitive(PrimitiveKind::cube, 0);
  const MeshStats s = mesh_stats(m);
  CHECK(s.vertex_count == 8);
  CHECK(s.face_count == 12);
  CHECK(s.total_area == doctest::Approx(6.0));
  CHECK(signed_volume(m) == doctest::Approx(1.0));
}

TEST_CASE("torus genus") {
  const TriMesh m = make_primitive(PrimitiveKind::torus, 3);
  CHECK(mesh_stats(m).euler_characteristic == 0);
  CHECK(is_watertight(m));
}

TEST_CASE("every primitive is closed, outward and inside the unit box") {
  for (PrimitiveKind kind : {PrimitiveKind::sphere, PrimitiveKind::cube, PrimitiveKind::capsule, PrimitiveKind::torus}) {
    for (int s : {0, 2, 4}) {
      CAPTURE(to_string(kind));
      CAPTURE(s);
      const TriMesh m = make_primitive(kind, s);
      CHECK_NOTHROW(m.validate());
      CHECK(is_watertight(m));
      CHECK(signed_volume(m) > 0.0);
      CHECK(m.colors.size() == m.vertices.size());
      const BoundingBox b = mesh_stats(m).bbox;
      CHECK(b.min.minCoeff() >= -0.5 - 1e-12);
      CHECK(b.max.maxCoeff() <= 0.5 + 1e-12);
      for (const Vec3& c : m.colors) CHECK((c.minCoeff() >= 0.0 && c.maxCoeff() <= 1.0));
    }
  }
}

TEST_CASE("primitive names and bounds") {
  CHECK(parse_primitive_kind("capsule") == PrimitiveKind::capsule);
  CHECK(to_string(PrimitiveKind::torus) == "torus");
  CHECK_THROWS_AS(parse_primitive_kind("bunny"), InvariantError);
  CHECK_THROWS_AS(make_primitive(PrimitiveKind::sphere, -1), InvariantError);
  CHECK_THROWS_AS(make_primitive(PrimitiveKind::sphere, kMaxSubdivision + 1), InvariantError);
}
