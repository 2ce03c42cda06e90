#pragma once

#include <vector>

#include "orbitcarve/geometry/camera.hpp"

namespace orbitcarve {

// Cameras on a circle at fixed elevation, all looking at `center`.
struct OrbitRig {
  double radius = 3.0;
  double elevation_deg = 0.0;
  double azimuth_start_deg = 0.0;
  Vec3 center = Vec3::Zero();
  double fov_y_deg = 40.0;
  int views = 36;
  int width = 256;
  int height = 256;

  // Throws InvariantError.
  void validate() const;
};

// Camera k sits at center + radius * (cos(phi) sin(theta_k), sin(phi), cos(phi) cos(theta_k))
// with theta_k = azimuth_start + 360 k / K and phi = elevation; world +y is up.
std::vector<Camera> build_orbit_cameras(const OrbitRig& rig);

}  // namespace orbitcarve
