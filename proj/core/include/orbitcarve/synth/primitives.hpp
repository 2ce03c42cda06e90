#pragma once

#include <string>

#include "orbitcarve/geometry/mesh.hpp"

namespace orbitcarve {

enum class PrimitiveKind { sphere, cube, capsule, torus };

// Parses "sphere", "cube", "capsule" or "torus"; throws InvariantError otherwise.
PrimitiveKind parse_primitive_kind(const std::string& name);
std::string to_string(PrimitiveKind kind);

inline constexpr int kMaxSubdivision = 6;

// Watertight, outward-oriented primitive inscribed in the box [-0.5, 0.5]^3,
// with procedural vertex colors.
//   sphere:  icosphere of radius 0.5, `subdivision` loop levels (10 * 4^s + 2
//            vertices); red for x >= 0, blue for x < 0.
//   cube:    side 1, each face split into a 2^s x 2^s grid (s = 0 gives 8
//            vertices and 12 faces); color is the position mapped into the RGB cube.
//   capsule: radius 0.25 along y, total height 1; colors shade with height.
//   torus:   ring radius 0.35 and tube radius 0.15 around the y axis; colors
//            shade with the ring angle.
// Throws InvariantError when subdivision is outside [0, kMaxSubdivision].
TriMesh make_primitive(PrimitiveKind kind, int subdivision);

}  // namespace orbitcarve
