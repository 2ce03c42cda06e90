#pragma once

#include <filesystem>
#include <string>

#include "orbitcarve/carve/carve.hpp"
#include "orbitcarve/common/error.hpp"
#include "orbitcarve/pipeline/config.hpp"

namespace orbitcarve {

// Failure inside one pipeline stage; what() reads "<stage>: <cause>".
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& cause)
      : Error(stage + ": " + cause), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct ReconstructResult {
  TriMesh mesh;  // dataset world coordinates
  LossReport loss;
  std::vector<double> color_loss;
  InitMethod init_used = InitMethod::hull;
  std::size_t init_vertices = 0;
  std::size_t init_faces = 0;
  double preflight_angle_deg = 0.0;
  double wall_seconds = 0.0;
};

// Side outputs next to the mesh: <stem>.loss.csv, <stem>.report.json and
// <stem>.summary.json.
struct ReconstructOutputs {
  std::filesystem::path mesh;
  std::filesystem::path loss_log;
  std::filesystem::path report;
  std::filesystem::path summary;
};

ReconstructOutputs reconstruct_outputs(const std::filesystem::path& mesh_path);

// Load, normalize, initialize, preflight, carve, fit colors and write every
// output. Throws StageError naming the failing stage.
ReconstructResult reconstruct(const PipelineConfig& config);

}  // namespace orbitcarve
