#include "orbitcarve/init/visual_hull.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "orbitcarve/common/error.hpp"
#include "orbitcarve/common/parallel.hpp"
#include "orbitcarve/init/marching_cubes.hpp"

namespace orbitcarve {

ScalarGrid visual_hull(const std::vector<MaskImage>& masks, const std::vector<Camera>& cameras,
                       int resolution) {
  if (masks.size() != cameras.size()) {
    throw DimensionError(fmt::format("visual hull got {} masks and {} cameras", masks.size(), cameras.size()));
  }
  if (masks.size() < 2) throw DimensionError("visual hull needs at least 2 views");
  if (resolution < 2) throw InvariantError("visual hull resolution must be ≥ 2");
  for (std::size_t v = 0; v < masks.size(); ++v) {
    if (!masks[v].same_size(cameras[v].width, cameras[v].height)) {
      throw DimensionError(fmt::format("view {}: mask is {}x{}, camera is {}x{}", v, masks[v].width(),
                                       masks[v].height(), cameras[v].width, cameras[v].height));
    }
  }
  const double spacing = 2.0 / (resolution - 1);
  ScalarGrid grid(resolution, Vec3::Constant(-1.0), spacing, 0.0);
  parallel_for_each_index(static_cast<std::size_t>(resolution), [&](std::size_t kk) {
    const int k = static_cast<int>(kk);
    for (int j = 0; j < resolution; ++j) {
      for (int i = 0; i < resolution; ++i) {
        const Vec3 p = grid.node(i, j, k);
        double occ = 1.0;
        for (std::size_t v = 0; v < masks.size() && occ > 0.0; ++v) {
          const Projection q = project(cameras[v], p);
          occ = q.valid ? std::min(occ, sample_bilinear(masks[v], q.x, q.y)) : 0.0;
        }
        grid.at(i, j, k) = occ;
      }
    }
  });
  return grid;
}

TriMesh visual_hull_mesh(const std::vector<MaskImage>& masks, const std::vector<Camera>& cameras,
                         int resolution) {
  // Padding closes the surface where the hull reaches the box faces.
  const ScalarGrid grid = padded(box_filter(visual_hull(masks, cameras, resolution)), 1, 0.0);
  return marching_cubes(grid, 0.5);
}

}  // namespace orbitcarve
