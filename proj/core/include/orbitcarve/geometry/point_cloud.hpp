#pragma once

#include <vector>

#include "orbitcarve/geometry/types.hpp"

namespace orbitcarve {

struct OrientedPointCloud {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;

  std::size_t size() const { return points.size(); }

  // Throws InvariantError: counts differ, non-finite point, or |n| off unit by > 1e-4.
  void validate() const;
};

}  // namespace orbitcarve
