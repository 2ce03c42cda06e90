#include "orbitcarve/metrics/report.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "../common/json_util.hpp"
#include "orbitcarve/common/error.hpp"

namespace orbitcarve {

using detail::Json;

EvalReport evaluate_meshes(const TriMesh& pred, const TriMesh& gt, std::size_t samples,
                           std::uint64_t seed, const OrbitDataset* dataset) {
  EvalReport r;
  r.samples = samples;
  r.seed = seed;
  r.chamfer = chamfer(pred, gt, samples, seed);
  r.normal_consistency = normal_consistency(pred, gt, samples, seed);
  if (dataset) r.silhouette = silhouette_iou(pred, *dataset);
  return r;
}

std::string eval_report_json(const EvalReport& report) {
  Json j;
  j["samples"] = report.samples;
  j["seed"] = report.seed;
  const ChamferResult& c = report.chamfer;
  j["chamfer"] = {{"mean", c.mean},       {"rms", c.rms},         {"mean_pred_to_gt", c.mean_ab},
                  {"mean_gt_to_pred", c.mean_ba}, {"rms_pred_to_gt", c.rms_ab}, {"rms_gt_to_pred", c.rms_ba}};
  j["normal_consistency"] = report.normal_consistency;
  if (report.silhouette) {
    Json views = Json::array();
    for (std::size_t v = 0; v < report.silhouette->per_view.size(); ++v) {
      views.push_back({{"view", v},
                       {"iou", report.silhouette->per_view[v]},
                       {"empty_union", static_cast<bool>(report.silhouette->empty_union[v])}});
    }
    j["silhouette_iou"] = {{"mean", report.silhouette->mean}, {"views", views}};
  }
  if (report.clip_score) j["clip_score"] = *report.clip_score;
  j["units"] = "normalized";
  return j.dump(2) + "\n";
}

void write_eval_report(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write report {}", path.string()));
  out << eval_report_json(report);
  if (!out) throw IoError(fmt::format("cannot write report {}", path.string()));
}

std::string format_eval_table(const EvalReport& report) {
  std::string s;
  auto row = [&](const std::string& name, const std::string& value) {
    s += fmt::format("{:<26} {}\n", name, value);
  };
  row("samples", fmt::format("{} (seed {})", report.samples, report.seed));
  row("chamfer mean", fmt::format("{:.6f}", report.chamfer.mean));
  row("chamfer rms", fmt::format("{:.6f}", report.chamfer.rms));
  row("  pred -> gt mean / rms", fmt::format("{:.6f} / {:.6f}", report.chamfer.mean_ab, report.chamfer.rms_ab));
  row("  gt -> pred mean / rms", fmt::format("{:.6f} / {:.6f}", report.chamfer.mean_ba, report.chamfer.rms_ba));
  row("normal consistency", fmt::format("{:.6f}", report.normal_consistency));
  if (report.silhouette) {
    double lo = 1.0;
    std::size_t empty = 0;
    for (std::size_t v = 0; v < report.silhouette->per_view.size(); ++v) {
      lo = std::min(lo, report.silhouette->per_view[v]);
      empty += report.silhouette->empty_union[v];
    }
    row("silhouette IoU mean", fmt::format("{:.6f}", report.silhouette->mean));
    row("silhouette IoU min", fmt::format("{:.6f}", lo));
    if (empty > 0) row("empty-union views", fmt::format("{}", empty));
  }
  if (report.clip_score) row("clip score", fmt::format("{:.6f}", *report.clip_score));
  return s;
}

}  // namespace orbitcarve
