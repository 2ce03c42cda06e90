#pragma once

#include <filesystem>
#include <vector>

#include "orbitcarve/geometry/camera.hpp"

namespace orbitcarve {

// Camera files are JSON: either one object with fx, fy, cx, cy, width, height,
// R (9 numbers, row-major) and t (3 numbers), or an array of such objects (one
// record per frame). Every camera is validated on load.
std::vector<Camera> load_cameras(const std::filesystem::path& path);
void save_cameras(const std::vector<Camera>& cameras, const std::filesystem::path& path);

}  // namespace orbitcarve
