#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "orbitcarve/metrics/chamfer.hpp"
#include "orbitcarve/metrics/silhouette.hpp"

namespace orbitcarve {

struct EvalReport {
  ChamferResult chamfer;
  double normal_consistency = 0.0;
  std::optional<SilhouetteResult> silhouette;
  std::optional<double> clip_score;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

// Chamfer and normal consistency of `pred` against `gt`, plus silhouette IoU
// when a dataset with decoded masks is given.
EvalReport evaluate_meshes(const TriMesh& pred, const TriMesh& gt, std::size_t samples,
                           std::uint64_t seed, const OrbitDataset* dataset = nullptr);

std::string eval_report_json(const EvalReport& report);
void write_eval_report(const EvalReport& report, const std::filesystem::path& path);

// Two-column text table for terminals.
std::string format_eval_table(const EvalReport& report);

}  // namespace orbitcarve
