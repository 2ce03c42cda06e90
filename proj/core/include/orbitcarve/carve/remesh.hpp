#pragma once

#include <vector>

#include "orbitcarve/carve/halfedge_mesh.hpp"
#include "orbitcarve/geometry/mesh.hpp"

namespace orbitcarve {

struct RemeshStats {
  std::size_t splits = 0;
  std::size_t collapses = 0;
  std::size_t flips = 0;
  std::size_t locked_edges = 0;  // boundary or non-manifold, left untouched
};

struct RemeshResult {
  TriMesh mesh;
  // sources[v]: input vertices (index, weight) the output vertex v descends from.
  std::vector<VertexSources> sources;
  RemeshStats stats;
};

// One remeshing pass toward `target_edge`: split edges longer than 4/3 of it
// at the midpoint, collapse edges shorter than 4/5 of it to the midpoint,
// flip edges that lower the total deviation of the four affected valences
// from 6, then move each vertex by smoothing * (tangential part of
// centroid(neighbors) - x).
RemeshResult remesh(const TriMesh& mesh, double target_edge, double smoothing);

}  // namespace orbitcarve
