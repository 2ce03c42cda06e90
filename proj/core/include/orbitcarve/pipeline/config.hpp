#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "orbitcarve/carve/carve.hpp"
#include "orbitcarve/carve/color_fit.hpp"

namespace orbitcarve {

enum class InitMethod { automatic, poisson, hull, mesh_file };

InitMethod parse_init_method(const std::string& name);  // "auto", "poisson", "hull", "mesh-file"
std::string to_string(InitMethod method);

struct PipelineConfig {
  std::filesystem::path dataset;
  std::filesystem::path output;
  InitMethod init = InitMethod::automatic;
  std::filesystem::path init_mesh;  // for mesh-file
  std::filesystem::path cloud;      // oriented PLY for poisson
  int grid_resolution = 96;
  CarveConfig carve;
  ColorFitConfig color;
  bool fit_colors = true;
  std::uint64_t seed = 0;
  int threads = 0;  // 0: ORBITCARVE_THREADS or machine default

  // Range checks plus existence of referenced input files. Throws InvariantError or IoError.
  void validate() const;
};

// Flat JSON object; keys absent from the file keep their defaults, unknown
// keys are an error. Paths are resolved relative to the file's directory.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
void apply_pipeline_config(PipelineConfig& config, const std::string& json_text,
                           const std::filesystem::path& base_dir = {});

// Same flat layout; every field written.
std::string pipeline_config_json(const PipelineConfig& config);

}  // namespace orbitcarve
