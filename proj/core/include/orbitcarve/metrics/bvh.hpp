#pragma once

#include <vector>

#include "orbitcarve/geometry/mesh.hpp"

namespace orbitcarve {

// Closest point of triangle (a, b, c) to p, exact up to rounding. Degenerate
// triangles reduce to their closest edge or vertex.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

struct SurfaceHit {
  int face = -1;
  Vec3 point = Vec3::Zero();
  double distance_sq = 0.0;
};

// Bounding-volume hierarchy over the faces of a mesh for nearest-surface
// queries. Immutable after construction; queries are thread-safe.
class TriangleBvh {
 public:
  // Throws EmptyMeshError when the mesh has no faces.
  explicit TriangleBvh(const TriMesh& mesh);

  // Nearest surface point; equal distances resolve to the lower face index.
  SurfaceHit closest(const Vec3& p) const;

  std::size_t face_count() const { return faces_.size(); }

 private:
  struct Node {
    Vec3 lo = Vec3::Zero();
    Vec3 hi = Vec3::Zero();
    int left = -1;   // child index, -1 for leaves
    int right = -1;
    int begin = 0;   // leaf range in order_
    int end = 0;
  };

  int build(int begin, int end);

  std::vector<Vec3> vertices_;
  std::vector<Face> faces_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
};

// Same query by scanning every face; reference for tests.
SurfaceHit closest_brute_force(const TriMesh& mesh, const Vec3& p);

}  // namespace orbitcarve
