#pragma once

#include <cstddef>
#include <vector>

#include "orbitcarve/geometry/types.hpp"

namespace orbitcarve {

// Indexed triangle mesh. `colors` is either empty or aligned with `vertices`.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  std::vector<Vec3> colors;

  bool has_colors() const { return !colors.empty(); }
  bool empty() const { return faces.empty(); }

  // Throws InvariantError / IndexError when an invariant is broken.
  void validate() const;
};

struct BoundingBox {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  Vec3 center() const { return 0.5 * (min + max); }
  Vec3 extent() const { return max - min; }
};

struct MeshStats {
  std::size_t vertex_count = 0;
  std::size_t face_count = 0;
  std::size_t edge_count = 0;  // unique undirected edges
  long long euler_characteristic = 0;
  double total_area = 0.0;
  BoundingBox bbox;
};

MeshStats mesh_stats(const TriMesh& mesh);

BoundingBox bounding_box(const std::vector<Vec3>& points);

// Unnormalized face normal, (b - a) x (c - a); its length is twice the area.
inline Vec3 face_area_vector(const TriMesh& mesh, std::size_t f) {
  const Face& t = mesh.faces[f];
  const Vec3& a = mesh.vertices[t[0]];
  return (mesh.vertices[t[1]] - a).cross(mesh.vertices[t[2]] - a);
}

// Area-weighted vertex normals. Vertices without incident faces (or whose
// incident faces are all degenerate) get (0, 0, 1) and one summary warning.
std::vector<Vec3> vertex_normals(const TriMesh& mesh);

// Same, without the warning; used in inner loops.
std::vector<Vec3> vertex_normals_quiet(const TriMesh& mesh);

struct EdgeTopology {
  std::size_t boundary_edges = 0;      // used by exactly one face
  std::size_t nonmanifold_edges = 0;   // used by three or more faces
  std::size_t inconsistent_edges = 0;  // two faces traversing the edge in the same direction
};

EdgeTopology edge_topology(const TriMesh& mesh);

// Undirected edge with its incident faces. An edge used by one face, or by
// three or more, is listed once per face with f1 = -1.
struct MeshEdge {
  int a = 0;
  int b = 0;
  int f0 = -1;
  int f1 = -1;
};

// Sorted by (min vertex, max vertex), then by face.
std::vector<MeshEdge> mesh_edges(const TriMesh& mesh);

// Every edge shared by exactly two consistently oriented faces.
bool is_watertight(const TriMesh& mesh);

// Signed volume by the divergence theorem; positive for outward orientation.
double signed_volume(const TriMesh& mesh);

// Applies x -> scale * x + translation to every vertex.
void transform_in_place(TriMesh& mesh, double scale, const Vec3& translation);

}  // namespace orbitcarve
