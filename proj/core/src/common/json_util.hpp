#pragma once

// Private JSON helpers shared by the file-format modules.

#include <string>

#include <nlohmann/json.hpp>

#include "orbitcarve/geometry/camera.hpp"

namespace orbitcarve::detail {

using Json = nlohmann::ordered_json;

// Camera record. `with_size` adds width/height (standalone camera files); the
// dataset manifest keeps the size at top level instead.
Json camera_to_json(const Camera& camera, bool with_size);

// Throws InvariantError with `context` prefixed on missing or malformed keys.
// Width/height fall back to the given defaults when absent.
Camera camera_from_json(const Json& j, int default_width, int default_height,
                        const std::string& context);

double require_number(const Json& j, const char* key, const std::string& context);

}  // namespace orbitcarve::detail
