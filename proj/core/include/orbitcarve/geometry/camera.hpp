#pragma once

#include "orbitcarve/geometry/types.hpp"

namespace orbitcarve {

// Pinhole camera with world-to-camera pose: x_cam = rotation * x_world + translation.
// The camera looks down +z; image x grows right and image y grows down. Pixel
// (i, j) is sampled at its center (i + 0.5, j + 0.5).
struct Camera {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 1;
  int height = 1;
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  // Throws InvariantError.
  void validate() const;

  // Camera center in world coordinates.
  Vec3 position() const { return -rotation.transpose() * translation; }

  Vec3 to_camera(const Vec3& world) const { return rotation * world + translation; }

  // Same pose with intrinsics rescaled to a new image size.
  Camera resized(int new_width, int new_height) const;
};

struct Projection {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;      // camera-space depth, unclamped
  bool valid = false;  // z > near plane
};

inline constexpr double kDefaultNearPlane = 1e-4;

Projection project(const Camera& camera, const Vec3& point, double near_plane = kDefaultNearPlane);

// Builds a world-to-camera rotation/translation for a camera at `eye` looking at
// `target`, with `up` mapping to image-up (so image y points along -up).
void look_at(Camera& camera, const Vec3& eye, const Vec3& target, const Vec3& up);

}  // namespace orbitcarve
