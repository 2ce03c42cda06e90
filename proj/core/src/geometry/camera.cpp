#include "orbitcarve/geometry/camera.hpp"

#include <cmath>

#include <Eigen/Geometry>
#include <fmt/format.h>

#include "orbitcarve/common/error.hpp"

namespace orbitcarve {

void Camera::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw InvariantError(fmt::format("camera focal lengths must be positive (fx={}, fy={})", fx, fy));
  }
  if (width <= 0 || height <= 0) {
    throw InvariantError(fmt::format("camera size must be positive ({}x{})", width, height));
  }
  if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height)) {
    throw InvariantError(
        fmt::format("principal point ({}, {}) outside {}x{} image", cx, cy, width, height));
  }
  if (!rotation.allFinite() || !translation.allFinite()) {
    throw InvariantError("camera pose has non-finite entries");
  }
  const double orth = (rotation * rotation.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (orth > 1e-6) {
    throw InvariantError(fmt::format("camera rotation is not orthonormal (error {:.3e})", orth));
  }
  const double det = rotation.determinant();
  if (std::abs(det - 1.0) > 1e-6) {
    throw InvariantError(fmt::format("camera rotation determinant is {}, expected +1", det));
  }
}

Camera Camera::resized(int new_width, int new_height) const {
  Camera c = *this;
  const double sx = static_cast<double>(new_width) / width;
  const double sy = static_cast<double>(new_height) / height;
  c.fx *= sx;
  c.cx *= sx;
  c.fy *= sy;
  c.cy *= sy;
  c.width = new_width;
  c.height = new_height;
  return c;
}

Projection project(const Camera& camera, const Vec3& point, double near_plane) {
  const Vec3 c = camera.to_camera(point);
  Projection p;
  p.z = c.z();
  p.valid = c.z() > near_plane;
  p.x = camera.fx * (c.x() / c.z()) + camera.cx;
  p.y = camera.fy * (c.y() / c.z()) + camera.cy;
  return p;
}

void look_at(Camera& camera, const Vec3& eye, const Vec3& target, const Vec3& up) {
  const Vec3 forward = (target - eye).normalized();
  Vec3 right = forward.cross(up);
  if (right.norm() < 1e-12) {
    throw InvariantError("look_at: view direction is parallel to the up vector");
  }
  right.normalize();
  const Vec3 down = forward.cross(right);
  camera.rotation.row(0) = right.transpose();
  camera.rotation.row(1) = down.transpose();
  camera.rotation.row(2) = forward.transpose();
  camera.translation = -camera.rotation * eye;
}

}  // namespace orbitcarve
