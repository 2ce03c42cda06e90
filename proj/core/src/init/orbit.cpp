#include "orbitcarve/init/orbit.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "orbitcarve/common/error.hpp"

namespace orbitcarve {

void OrbitRig::validate() const {
  if (views < 2) throw InvariantError("views must be ≥ 2");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvariantError(fmt::format("orbit radius must be positive (got {})", radius));
  }
  if (!(fov_y_deg > 0.0 && fov_y_deg < 180.0)) {
    throw InvariantError(fmt::format("fov_y must be in (0, 180) degrees (got {})", fov_y_deg));
  }
  if (!(std::abs(elevation_deg) < 90.0)) {
    throw InvariantError(fmt::format("elevation must be in (-90, 90) degrees (got {})", elevation_deg));
  }
  if (!std::isfinite(azimuth_start_deg) || !center.allFinite()) {
    throw InvariantError("orbit azimuth and center must be finite");
  }
  if (width <= 0 || height <= 0) {
    throw InvariantError(fmt::format("image size must be positive ({}x{})", width, height));
  }
}

std::vector<Camera> build_orbit_cameras(const OrbitRig& rig) {
  rig.validate();
  constexpr double kDeg = std::numbers::pi / 180.0;
  const double f = 0.5 * rig.height / std::tan(0.5 * rig.fov_y_deg * kDeg);
  const double phi = rig.elevation_deg * kDeg;
  std::vector<Camera> cameras;
  cameras.reserve(rig.views);
  for (int k = 0; k < rig.views; ++k) {
    const double theta = (rig.azimuth_start_deg + 360.0 * k / rig.views) * kDeg;
    const Vec3 eye = rig.center + rig.radius * Vec3(std::cos(phi) * std::sin(theta), std::sin(phi),
                                                    std::cos(phi) * std::cos(theta));
    Camera cam;
    cam.fx = f;
    cam.fy = f;
    cam.width = rig.width;
    cam.height = rig.height;
    cam.cx = 0.5 * rig.width;
    cam.cy = 0.5 * rig.height;
    look_at(cam, eye, rig.center, Vec3(0, 1, 0));
    cameras.push_back(cam);
  }
  return cameras;
}

}  // namespace orbitcarve
