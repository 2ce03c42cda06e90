#include "orbitcarve/carve/remesh.hpp"

#include <cmath>
#include <algorithm>
#include <cstdlib>
#include <utility>

#include <fmt/format.h>

#include "orbitcarve/common/error.hpp"
#include "orbitcarve/common/log.hpp"

namespace orbitcarve {
namespace {

constexpr int kMaxSweeps = 10;

int deviation(int valence) { return std::abs(valence - 6); }

}  // namespace

RemeshResult remesh(const TriMesh& mesh, double target_edge, double smoothing) {
  if (!(target_edge > 0.0)) throw InvariantError(fmt::format("target edge must be positive (got {})", target_edge));
  if (!(smoothing >= 0.0 && smoothing < 1.0)) {
    throw InvariantError(fmt::format("smoothing must be in [0, 1) (got {})", smoothing));
  }
  const double hi = 4.0 / 3.0 * target_edge;
  const double lo = 4.0 / 5.0 * target_edge;
  const double min_area = 1e-4 * target_edge * target_edge;

  HalfedgeMesh hm(mesh);
  RemeshResult result;
  result.stats.locked_edges = hm.locked_edge_count();
  if (hm.locked_edge_count() > 0) {
    log::debug(fmt::format("remesh: {} boundary or non-manifold edges left untouched", hm.locked_edge_count()));
  }

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    // Longest first; edges created during the sweep wait for the next one.
    std::vector<std::pair<double, int>> long_edges;
    for (int h = 0; h < hm.halfedge_count(); ++h) {
      const int t = hm.twin(h);
      if (t < 0 || t < h || !hm.face_alive(h / 3)) continue;
      const double len = hm.edge_length(h);
      if (len > hi) long_edges.emplace_back(-len, h);
    }
    std::sort(long_edges.begin(), long_edges.end());
    std::size_t count = 0;
    for (const auto& [neg_len, h] : long_edges) {
      if (hm.twin(h) >= 0 && hm.edge_length(h) > hi && hm.split(h)) ++count;
    }
    result.stats.splits += count;
    if (count == 0) break;
  }

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    std::size_t count = 0;
    for (int h = 0; h < hm.halfedge_count(); ++h) {
      if (!hm.face_alive(h / 3)) continue;
      const int t = hm.twin(h);
      if (t < 0 || t < h) continue;
      if (hm.edge_length(h) < lo && hm.collapse(h, hi, min_area)) ++count;
    }
    result.stats.collapses += count;
    if (count == 0) break;
  }

  for (int h = 0; h < hm.halfedge_count(); ++h) {
    if (!hm.face_alive(h / 3)) continue;
    const int t = hm.twin(h);
    if (t < 0 || t < h) continue;
    const int a = hm.from(h), b = hm.to(h);
    const int c = hm.to(HalfedgeMesh::next(h)), d = hm.to(HalfedgeMesh::next(t));
    const int before = deviation(hm.valence(a)) + deviation(hm.valence(b)) + deviation(hm.valence(c)) +
                       deviation(hm.valence(d));
    const int after = deviation(hm.valence(a) - 1) + deviation(hm.valence(b) - 1) +
                      deviation(hm.valence(c) + 1) + deviation(hm.valence(d) + 1);
    if (after < before && hm.flip(h, min_area)) ++result.stats.flips;
  }

  if (smoothing > 0.0) {
    std::vector<Vec3> moved(hm.vertex_count());
    for (int v = 0; v < hm.vertex_count(); ++v) {
      moved[v] = hm.position(v);
      if (!hm.vertex_alive(v) || hm.locked(v)) continue;
      const std::vector<int> ring = hm.neighbors(v);
      if (ring.empty()) continue;
      Vec3 centroid = Vec3::Zero();
      for (int w : ring) centroid += hm.position(w);
      centroid /= static_cast<double>(ring.size());
      const Vec3 n = hm.vertex_normal(v);
      Vec3 delta = centroid - hm.position(v);
      delta -= n * n.dot(delta);
      moved[v] += smoothing * delta;
    }
    for (int v = 0; v < hm.vertex_count(); ++v) hm.set_position(v, moved[v]);
  }

  result.mesh = hm.to_mesh(&result.sources);
  return result;
}

}  // namespace orbitcarve
