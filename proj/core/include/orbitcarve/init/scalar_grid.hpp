#pragma once

#include <cstddef>
#include <vector>

#include "orbitcarve/geometry/types.hpp"

namespace orbitcarve {

// N x N x N samples at nodes origin + spacing * (i, j, k), stored with i fastest.
struct ScalarGrid {
  int resolution = 0;
  Vec3 origin = Vec3::Zero();
  double spacing = 1.0;
  std::vector<double> values;

  ScalarGrid() = default;
  ScalarGrid(int n, const Vec3& origin, double spacing, double fill = 0.0);

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * resolution + j) * resolution + i;
  }
  double& at(int i, int j, int k) { return values[index(i, j, k)]; }
  double at(int i, int j, int k) const { return values[index(i, j, k)]; }
  Vec3 node(int i, int j, int k) const { return origin + spacing * Vec3(i, j, k); }

  // Trilinear interpolation; points outside the grid clamp to the border.
  double sample(const Vec3& p) const;

  // Throws InvariantError.
  void validate() const;
};

// One pass of a 3x3x3 box filter; border nodes average over the in-grid neighbors.
ScalarGrid box_filter(const ScalarGrid& grid);

// Adds `layers` nodes of `value` on every side, keeping node positions.
ScalarGrid padded(const ScalarGrid& grid, int layers, double value);

}  // namespace orbitcarve
