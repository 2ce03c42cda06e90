#include "orbitcarve/geometry/camera_io.hpp"

#include <fstream>

#include <fmt/format.h>

#include "../common/json_util.hpp"
#include "orbitcarve/common/error.hpp"

namespace orbitcarve {
namespace detail {

Json camera_to_json(const Camera& camera, bool with_size) {
  Json j;
  j["fx"] = camera.fx;
  j["fy"] = camera.fy;
  j["cx"] = camera.cx;
  j["cy"] = camera.cy;
  if (with_size) {
    j["width"] = camera.width;
    j["height"] = camera.height;
  }
  Json r = Json::array();
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) r.push_back(camera.rotation(row, col));
  }
  j["R"] = r;
  j["t"] = Json::array({camera.translation.x(), camera.translation.y(), camera.translation.z()});
  return j;
}

double require_number(const Json& j, const char* key, const std::string& context) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_number()) {
    throw InvariantError(fmt::format("{}: missing numeric field '{}'", context, key));
  }
  return j.at(key).get<double>();
}

Camera camera_from_json(const Json& j, int default_width, int default_height,
                        const std::string& context) {
  Camera c;
  c.fx = require_number(j, "fx", context);
  c.fy = require_number(j, "fy", context);
  c.cx = require_number(j, "cx", context);
  c.cy = require_number(j, "cy", context);
  c.width = j.contains("width") ? static_cast<int>(require_number(j, "width", context)) : default_width;
  c.height =
      j.contains("height") ? static_cast<int>(require_number(j, "height", context)) : default_height;
  if (!j.contains("R") || !j.at("R").is_array() || j.at("R").size() != 9) {
    throw InvariantError(fmt::format("{}: 'R' must hold 9 numbers", context));
  }
  if (!j.contains("t") || !j.at("t").is_array() || j.at("t").size() != 3) {
    throw InvariantError(fmt::format("{}: 't' must hold 3 numbers", context));
  }
  for (int i = 0; i < 9; ++i) {
    if (!j.at("R")[i].is_number()) throw InvariantError(fmt::format("{}: 'R' must hold numbers", context));
    c.rotation(i / 3, i % 3) = j.at("R")[i].get<double>();
  }
  for (int i = 0; i < 3; ++i) {
    if (!j.at("t")[i].is_number()) throw InvariantError(fmt::format("{}: 't' must hold numbers", context));
    c.translation[i] = j.at("t")[i].get<double>();
  }
  try {
    c.validate();
  } catch (const InvariantError& e) {
    throw InvariantError(fmt::format("{}: {}", context, e.what()));
  }
  return c;
}

}  // namespace detail

std::vector<Camera> load_cameras(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  detail::Json j;
  try {
    j = detail::Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string(), e.what(), static_cast<long long>(e.byte), true);
  }
  std::vector<Camera> cams;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      cams.push_back(detail::camera_from_json(j[i], 0, 0, fmt::format("{} record {}", path.string(), i)));
    }
  } else {
    cams.push_back(detail::camera_from_json(j, 0, 0, path.string()));
  }
  return cams;
}

void save_cameras(const std::vector<Camera>& cameras, const std::filesystem::path& path) {
  detail::Json j;
  if (cameras.size() == 1) {
    j = detail::camera_to_json(cameras.front(), true);
  } else {
    j = detail::Json::array();
    for (const Camera& c : cameras) j.push_back(detail::camera_to_json(c, true));
  }
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << j.dump(2) << '\n';
}

}  // namespace orbitcarve
