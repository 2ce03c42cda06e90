#pragma once

#include "orbitcarve/geometry/mesh.hpp"
#include "orbitcarve/geometry/point_cloud.hpp"
#include "orbitcarve/init/scalar_grid.hpp"

namespace orbitcarve {

struct PoissonOptions {
  int resolution = 96;
  double tolerance = 1e-6;  // relative residual
  int max_iterations = 0;   // 0 means 10 * resolution
  // Grid edge length relative to the largest bounding-box extent of the cloud.
  double box_scale = 1.4;
};

inline constexpr std::size_t kMinPoissonPoints = 100;

// Dense-grid Poisson reconstruction. The returned indicator is shifted so that
// its mean over the input points is zero; it is negative inside the surface.
// Throws InvariantError for fewer than 100 points and ConvergenceError when
// conjugate gradients stall.
ScalarGrid poisson_reconstruct(const OrientedPointCloud& cloud, const PoissonOptions& options = {});

// Zero level set of poisson_reconstruct, oriented outward.
TriMesh poisson_mesh(const OrientedPointCloud& cloud, const PoissonOptions& options = {});

}  // namespace orbitcarve
