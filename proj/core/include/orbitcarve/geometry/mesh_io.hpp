#pragma once

#include <filesystem>

#include "orbitcarve/geometry/mesh.hpp"
#include "orbitcarve/geometry/point_cloud.hpp"

namespace orbitcarve {

// Reads .obj (ASCII, "v x y z [r g b]" / "f i j k") or .ply (binary
// little-endian only). Throws ParseError with a line number or byte offset,
// IndexError naming the face, IoError when the file cannot be opened.
TriMesh load_mesh(const std::filesystem::path& path);

// Writes .obj or binary little-endian .ply. Colors are stored as uchar
// round(c * 255) in PLY and as full-precision floats in OBJ.
void save_mesh(const TriMesh& mesh, const std::filesystem::path& path);

// Binary little-endian PLY with x, y, z, nx, ny, nz. Normals are renormalized
// on load.
OrientedPointCloud load_point_cloud(const std::filesystem::path& path);
void save_point_cloud(const OrientedPointCloud& cloud, const std::filesystem::path& path);

}  // namespace orbitcarve
