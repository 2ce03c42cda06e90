#pragma once

#include <utility>
#include <vector>

#include "orbitcarve/geometry/mesh.hpp"

namespace orbitcarve {

// Weighted list of input vertices a remeshed vertex descends from.
using VertexSources = std::vector<std::pair<int, double>>;

// Triangle mesh with implicit half-edges: half-edge 3f + k runs from corner k
// to corner k + 1 of face f. twin() links the opposite half-edge, or is
// kBoundary / kLocked for edges with one face, three or more faces, or
// inconsistent orientation. Vertices on such edges are locked and never moved
// or removed by the local operators.
class HalfedgeMesh {
 public:
  static constexpr int kBoundary = -1;
  static constexpr int kLocked = -2;

  explicit HalfedgeMesh(const TriMesh& mesh);

  int halfedge_count() const { return static_cast<int>(twin_.size()); }
  int face_count() const { return static_cast<int>(faces_.size()); }
  int vertex_count() const { return static_cast<int>(pos_.size()); }

  bool face_alive(int f) const { return !face_dead_[f]; }
  bool vertex_alive(int v) const { return !vert_dead_[v]; }
  bool locked(int v) const { return locked_[v]; }
  int twin(int h) const { return twin_[h]; }
  int from(int h) const { return faces_[h / 3][h % 3]; }
  int to(int h) const { return faces_[h / 3][(h % 3 + 1) % 3]; }
  static int next(int h) { return 3 * (h / 3) + (h % 3 + 1) % 3; }
  static int prev(int h) { return 3 * (h / 3) + (h % 3 + 2) % 3; }
  int valence(int v) const { return valence_[v]; }
  const Vec3& position(int v) const { return pos_[v]; }
  void set_position(int v, const Vec3& p) { pos_[v] = p; }
  const VertexSources& sources(int v) const { return sources_[v]; }

  // Number of undirected edges that are boundary or non-manifold.
  std::size_t locked_edge_count() const { return locked_edges_; }

  double edge_length(int h) const { return (pos_[to(h)] - pos_[from(h)]).norm(); }

  // Outgoing half-edges around an unlocked vertex, in rotation order. Empty
  // when the fan is not a closed disk.
  std::vector<int> outgoing(int v) const;
  std::vector<int> neighbors(int v) const;

  // Inserts the edge midpoint. Requires an interior edge.
  bool split(int h);

  // Merges to(h) into from(h) at the edge midpoint. Rejected unless both ends
  // are unlocked, the link condition holds, both opposite vertices keep
  // valence >= 3, no resulting edge exceeds max_edge, and no surviving face
  // flips by more than 90 degrees or drops below min_area.
  bool collapse(int h, double max_edge, double min_area);

  // Replaces the edge by the other diagonal of its quad. Rejected unless all
  // four vertices are unlocked, the end valences exceed 3, the diagonal is not
  // already an edge, and neither new face folds or drops below min_area.
  bool flip(int h, double min_area);

  // Unit area-weighted vertex normal (zero when undefined).
  Vec3 vertex_normal(int v) const;

  // Compacted mesh; `sources` receives one entry per output vertex.
  TriMesh to_mesh(std::vector<VertexSources>* sources = nullptr) const;

 private:
  int find_halfedge(int f, int a, int b) const;
  void set_face(int f, int a, int b, int c);
  int add_face(int a, int b, int c);
  void link(int h, int outer);
  void refresh_vertex_handles(int f);
  Vec3 face_normal(int a, int b, int c) const;

  std::vector<Vec3> pos_;
  std::vector<Face> faces_;
  std::vector<int> twin_;
  std::vector<int> out_;  // one outgoing half-edge per vertex
  std::vector<int> valence_;
  std::vector<char> face_dead_;
  std::vector<char> vert_dead_;
  std::vector<char> locked_;
  std::vector<VertexSources> sources_;
  std::vector<Vec3> colors_;
  std::size_t locked_edges_ = 0;
};

}  // namespace orbitcarve
