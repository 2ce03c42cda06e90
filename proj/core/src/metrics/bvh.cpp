#include "orbitcarve/metrics/bvh.hpp"

#include <algorithm>
#include <limits>

#include "orbitcarve/common/error.hpp"

namespace orbitcarve {
namespace {

constexpr int kLeafSize = 4;

double box_distance_sq(const Vec3& p, const Vec3& lo, const Vec3& hi) {
  double d = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double e = std::max({lo[k] - p[k], 0.0, p[k] - hi[k]});
    d += e * e;
  }
  return d;
}

// Keeps the nearer hit; ties go to the lower face.
void consider(SurfaceHit& best, int face, const Vec3& q, const Vec3& p) {
  const double d = (q - p).squaredNorm();
  if (best.face < 0 || d < best.distance_sq || (d == best.distance_sq && face < best.face)) {
    best.face = face;
    best.point = q;
    best.distance_sq = d;
  }
}

Vec3 closest_on_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return a;
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

}  // namespace

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  if (ab.cross(ac).squaredNorm() == 0.0) {
    Vec3 best = closest_on_segment(p, a, b);
    for (const Vec3& q : {closest_on_segment(p, b, c), closest_on_segment(p, c, a)}) {
      if ((q - p).squaredNorm() < (best - p).squaredNorm()) best = q;
    }
    return best;
  }

  // Voronoi-region walk.
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }

  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

TriangleBvh::TriangleBvh(const TriMesh& mesh) : vertices_(mesh.vertices), faces_(mesh.faces) {
  if (faces_.empty()) throw EmptyMeshError("nearest-surface queries need a mesh with faces");
  order_.resize(faces_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
  nodes_.reserve(2 * faces_.size() / kLeafSize + 2);
  build(0, static_cast<int>(faces_.size()));
}

int TriangleBvh::build(int begin, int end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  Vec3 clo = lo;
  Vec3 chi = hi;
  for (int i = begin; i < end; ++i) {
    const Face& t = faces_[order_[i]];
    Vec3 centroid = Vec3::Zero();
    for (int v : t) {
      lo = lo.cwiseMin(vertices_[v]);
      hi = hi.cwiseMax(vertices_[v]);
      centroid += vertices_[v] / 3.0;
    }
    clo = clo.cwiseMin(centroid);
    chi = chi.cwiseMax(centroid);
  }
  nodes_[id].lo = lo;
  nodes_[id].hi = hi;
  if (end - begin <= kLeafSize) {
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }
  int axis = 0;
  (chi - clo).maxCoeff(&axis);
  const int mid = begin + (end - begin) / 2;
  auto key = [&](int f) {
    const Face& t = faces_[f];
    return vertices_[t[0]][axis] + vertices_[t[1]][axis] + vertices_[t[2]][axis];
  };
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end, [&](int x, int y) {
    const double kx = key(x);
    const double ky = key(y);
    return kx < ky || (kx == ky && x < y);
  });
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

SurfaceHit TriangleBvh::closest(const Vec3& p) const {
  SurfaceHit best;
  int stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& n = nodes_[stack[--top]];
    // Equal-distance boxes are still visited so ties can reach the lower index.
    if (best.face >= 0 && box_distance_sq(p, n.lo, n.hi) > best.distance_sq) continue;
    if (n.left < 0) {
      for (int i = n.begin; i < n.end; ++i) {
        const int f = order_[i];
        const Face& t = faces_[f];
        consider(best, f, closest_point_on_triangle(p, vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]), p);
      }
      continue;
    }
    // Push the farther child first so the nearer one is searched first.
    const double dl = box_distance_sq(p, nodes_[n.left].lo, nodes_[n.left].hi);
    const double dr = box_distance_sq(p, nodes_[n.right].lo, nodes_[n.right].hi);
    if (dl <= dr) {
      stack[top++] = n.right;
      stack[top++] = n.left;
    } else {
      stack[top++] = n.left;
      stack[top++] = n.right;
    }
  }
  return best;
}

SurfaceHit closest_brute_force(const TriMesh& mesh, const Vec3& p) {
  if (mesh.faces.empty()) throw EmptyMeshError("nearest-surface queries need a mesh with faces");
  SurfaceHit best;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& t = mesh.faces[f];
    consider(best, static_cast<int>(f),
             closest_point_on_triangle(p, mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]), p);
  }
  return best;
}

}  // namespace orbitcarve
