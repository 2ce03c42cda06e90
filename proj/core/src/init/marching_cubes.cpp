#include "orbitcarve/init/marching_cubes.hpp"

#include <fmt/format.h>

#include "mc_tables.hpp"
#include "orbitcarve/common/error.hpp"

namespace orbitcarve {
namespace {

constexpr int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                               {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
constexpr int kEdgeCorners[12][2] = {{0, 1}, {1, 2}, {3, 2}, {0, 3}, {4, 5}, {5, 6},
                                     {7, 6}, {4, 7}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};

}  // namespace

TriMesh marching_cubes(const ScalarGrid& grid, double iso) {
  grid.validate();
  const int n = grid.resolution;
  // Vertex index per (lower node, axis).
  std::vector<int> edge_vertex(3 * grid.values.size(), -1);
  TriMesh mesh;

  for (int k = 0; k + 1 < n; ++k) {
    for (int j = 0; j + 1 < n; ++j) {
      for (int i = 0; i + 1 < n; ++i) {
        double val[8];
        int cube = 0;
        for (int c = 0; c < 8; ++c) {
          val[c] = grid.at(i + kCorner[c][0], j + kCorner[c][1], k + kCorner[c][2]);
          if (val[c] < iso) cube |= 1 << c;
        }
        const int edges = detail::kEdgeTable[cube];
        if (edges == 0) continue;
        int vid[12];
        for (int e = 0; e < 12; ++e) {
          if (!(edges & (1 << e))) continue;
          const int a = kEdgeCorners[e][0];
          const int b = kEdgeCorners[e][1];
          const int ai = i + kCorner[a][0], aj = j + kCorner[a][1], ak = k + kCorner[a][2];
          const int axis = kCorner[b][0] != kCorner[a][0] ? 0 : (kCorner[b][1] != kCorner[a][1] ? 1 : 2);
          int& slot = edge_vertex[3 * grid.index(ai, aj, ak) + axis];
          if (slot < 0) {
            const double t = (iso - val[a]) / (val[b] - val[a]);
            const Vec3 pa = grid.node(ai, aj, ak);
            Vec3 pb = pa;
            pb[axis] += grid.spacing;
            slot = static_cast<int>(mesh.vertices.size());
            mesh.vertices.push_back(pa + t * (pb - pa));
          }
          vid[e] = slot;
        }
        const auto& row = detail::kTriTable[cube];
        for (int m = 0; m < 16 && row[m] >= 0; m += 3) {
          mesh.faces.push_back({vid[row[m]], vid[row[m + 1]], vid[row[m + 2]]});
        }
      }
    }
  }
  if (mesh.faces.empty()) {
    throw EmptyMeshError(fmt::format("no iso-surface at level {} in the grid", iso));
  }
  return mesh;
}

}  // namespace orbitcarve
