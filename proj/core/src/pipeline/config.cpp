#include "orbitcarve/pipeline/config.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "../common/json_util.hpp"
#include "orbitcarve/common/error.hpp"

namespace orbitcarve {
namespace {

using detail::Json;
namespace fs = std::filesystem;

struct Field {
  const char* key;
  std::function<void(PipelineConfig&, const Json&, const fs::path&)> read;
  std::function<Json(const PipelineConfig&)> write;
};

template <typename T>
T get_as(const Json& v, const char* key) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw InvariantError(fmt::format("config key '{}' must be a boolean", key));
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw InvariantError(fmt::format("config key '{}' must be an integer", key));
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw InvariantError(fmt::format("config key '{}' must be a number", key));
  } else {
    if (!v.is_string()) throw InvariantError(fmt::format("config key '{}' must be a string", key));
  }
  return v.get<T>();
}

template <typename T, typename Access>
Field scalar(const char* key, Access access) {
  return {key,
          [key, access](PipelineConfig& c, const Json& v, const fs::path&) { access(c) = get_as<T>(v, key); },
          [access](const PipelineConfig& c) { return Json(access(const_cast<PipelineConfig&>(c))); }};
}

template <typename Access>
Field path(const char* key, Access access) {
  return {key,
          [key, access](PipelineConfig& c, const Json& v, const fs::path& base) {
            fs::path p = get_as<std::string>(v, key);
            if (!p.empty() && p.is_relative() && !base.empty()) p = base / p;
            access(c) = p;
          },
          [access](const PipelineConfig& c) { return Json(access(const_cast<PipelineConfig&>(c)).string()); }};
}

#define OC_FIELD(T, key, member) scalar<T>(key, [](PipelineConfig& c) -> T& { return c.member; })
#define OC_PATH(key, member) path(key, [](PipelineConfig& c) -> fs::path& { return c.member; })

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      OC_PATH("dataset", dataset),
      OC_PATH("output", output),
      {"init",
       [](PipelineConfig& c, const Json& v, const fs::path&) {
         c.init = parse_init_method(get_as<std::string>(v, "init"));
       },
       [](const PipelineConfig& c) { return Json(to_string(c.init)); }},
      OC_PATH("init_mesh", init_mesh),
      OC_PATH("cloud", cloud),
      OC_FIELD(int, "grid_resolution", grid_resolution),
      OC_FIELD(int, "iterations", carve.iterations),
      OC_FIELD(double, "lr_start", carve.lr_start),
      OC_FIELD(double, "lr_end", carve.lr_end),
      OC_FIELD(double, "beta1", carve.beta1),
      OC_FIELD(double, "beta2", carve.beta2),
      OC_FIELD(double, "epsilon", carve.epsilon),
      OC_FIELD(int, "remesh_interval", carve.remesh_interval),
      OC_FIELD(double, "edge_start", carve.edge_start),
      OC_FIELD(double, "edge_end", carve.edge_end),
      OC_FIELD(double, "edge_schedule_fraction", carve.edge_schedule_fraction),
      OC_FIELD(double, "smoothing", carve.smoothing),
      OC_FIELD(int, "render_size", carve.render_size),
      OC_FIELD(double, "mask_weight", carve.mask_weight),
      OC_FIELD(double, "normal_weight", carve.normal_weight),
      OC_FIELD(double, "sigma", carve.raster.sigma),
      OC_FIELD(double, "support_sigmas", carve.raster.support_sigmas),
      OC_FIELD(double, "near_plane", carve.raster.near_plane),
      OC_FIELD(bool, "fit_colors", fit_colors),
      OC_FIELD(int, "color_iterations", color.iterations),
      OC_FIELD(double, "color_lr_start", color.lr_start),
      OC_FIELD(double, "color_lr_end", color.lr_end),
      OC_FIELD(double, "color_initial", color.initial_color),
      OC_FIELD(int, "color_render_size", color.render_size),
      OC_FIELD(std::uint64_t, "seed", seed),
      OC_FIELD(int, "threads", threads),
  };
  return table;
}

#undef OC_FIELD
#undef OC_PATH

void require_file(const fs::path& p, const char* what) {
  std::error_code ec;
  if (!fs::exists(p, ec)) throw IoError(fmt::format("{} not found: {}", what, p.string()));
}

}  // namespace

InitMethod parse_init_method(const std::string& name) {
  if (name == "auto") return InitMethod::automatic;
  if (name == "poisson") return InitMethod::poisson;
  if (name == "hull") return InitMethod::hull;
  if (name == "mesh-file") return InitMethod::mesh_file;
  throw InvariantError(fmt::format("unknown init method '{}' (expected auto, poisson, hull or mesh-file)", name));
}

std::string to_string(InitMethod method) {
  switch (method) {
    case InitMethod::automatic: return "auto";
    case InitMethod::poisson: return "poisson";
    case InitMethod::hull: return "hull";
    case InitMethod::mesh_file: return "mesh-file";
  }
  return "auto";
}

void PipelineConfig::validate() const {
  carve.validate();
  if (fit_colors) color.validate();
  if (grid_resolution < 8 || grid_resolution > 512) {
    throw InvariantError(fmt::format("grid resolution must be in [8, 512] (got {})", grid_resolution));
  }
  if (threads < 0) throw InvariantError("threads must be >= 0");
  if (dataset.empty()) throw InvariantError("no dataset given");
  if (output.empty()) throw InvariantError("no output path given");
  require_file(dataset, "dataset");
  if (init == InitMethod::mesh_file) {
    if (init_mesh.empty()) throw InvariantError("init mesh-file needs an initial mesh path");
    require_file(init_mesh, "initial mesh");
  }
  if (init == InitMethod::poisson && cloud.empty()) throw InvariantError("init poisson needs an oriented point cloud");
  if (!cloud.empty()) require_file(cloud, "point cloud");
}

void apply_pipeline_config(PipelineConfig& config, const std::string& json_text, const fs::path& base_dir) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvariantError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!j.is_object()) throw InvariantError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const Field& f : fields()) {
      if (key == f.key) {
        f.read(config, value, base_dir);
        known = true;
        break;
      }
    }
    if (!known) throw InvariantError(fmt::format("unknown config key '{}'", key));
  }
}

PipelineConfig load_pipeline_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read config {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  PipelineConfig config;
  apply_pipeline_config(config, ss.str(), path.parent_path());
  return config;
}

std::string pipeline_config_json(const PipelineConfig& config) {
  Json j = Json::object();
  for (const Field& f : fields()) j[f.key] = f.write(config);
  return j.dump(2) + "\n";
}

}  // namespace orbitcarve
