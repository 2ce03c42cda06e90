#pragma once

#include <vector>

#include "orbitcarve/geometry/camera.hpp"
#include "orbitcarve/geometry/image.hpp"
#include "orbitcarve/geometry/mesh.hpp"
#include "orbitcarve/init/scalar_grid.hpp"

namespace orbitcarve {

inline constexpr int kDefaultHullResolution = 96;

// Occupancy over the [-1, 1]^3 box: each node takes the minimum over views of
// the bilinearly sampled mask at its projection. Nodes that project outside an
// image or lie behind a camera get 0. Throws DimensionError on count mismatch
// or fewer than two views.
ScalarGrid visual_hull(const std::vector<MaskImage>& masks, const std::vector<Camera>& cameras,
                       int resolution = kDefaultHullResolution);

// Hull grid smoothed by one box filter, extracted at occupancy 0.5.
TriMesh visual_hull_mesh(const std::vector<MaskImage>& masks, const std::vector<Camera>& cameras,
                         int resolution = kDefaultHullResolution);

}  // namespace orbitcarve
