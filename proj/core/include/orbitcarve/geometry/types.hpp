#pragma once

#include <array>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace orbitcarve {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

// Vertex index triple, counter-clockwise seen from outside.
using Face = std::array<int, 3>;

}  // namespace orbitcarve
