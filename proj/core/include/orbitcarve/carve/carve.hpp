#pragma once

#include <filesystem>
#include <vector>

#include "orbitcarve/geometry/mesh.hpp"
#include "orbitcarve/raster/rasterizer.hpp"
#include "orbitcarve/synth/dataset.hpp"

namespace orbitcarve {

struct CarveConfig {
  int iterations = 400;
  // Log-linear learning-rate schedule from lr_start to lr_end.
  double lr_start = 1e-2;
  double lr_end = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int remesh_interval = 5;  // 0 disables remeshing
  // Target edge length moves linearly from edge_start to edge_end over the
  // first edge_schedule_fraction of the iterations.
  double edge_start = 0.06;
  double edge_end = 0.02;
  double edge_schedule_fraction = 0.8;
  double smoothing = 0.1;
  // Square render size for the losses; dataset frames are box-downsampled by
  // an integer factor to match.
  int render_size = 256;
  double mask_weight = 1.0;
  double normal_weight = 1.0;
  RasterConfig raster;  // hard mode gives exact losses but no silhouette gradient

  // Throws InvariantError.
  void validate() const;

  double learning_rate(int iteration) const;
  double target_edge(int iteration) const;
};

struct IterationLoss {
  int iteration = 0;  // 1-based
  double mask = 0.0;
  double normal = 0.0;
  double total = 0.0;
  std::size_t vertices = 0;
};

struct LossReport {
  std::vector<IterationLoss> iterations;
  std::vector<double> final_view_losses;  // total loss per view at the last iteration

  // Final total <= first total.
  bool decreased() const;
};

// Writes `iter,loss_mask,loss_normal,loss_total,verts` lines.
void write_loss_log(const LossReport& report, const std::filesystem::path& path);

// Frames resampled to the optimization size.
struct ViewTargets {
  std::vector<Camera> cameras;
  std::vector<MaskImage> masks;
  std::vector<NormalImage> normals;
  std::vector<RgbImage> rgb;
};

// Downsamples by width / render_size, which must be a positive integer
// dividing both dimensions (render_size >= width keeps full size).
ViewTargets prepare_targets(const OrbitDataset& dataset, int render_size);

// Recon loss and its vertex gradient over all views, views summed in order.
struct ReconEvaluation {
  double mask = 0.0;
  double normal = 0.0;
  double total = 0.0;
  std::vector<double> view_totals;
  std::vector<Vec3> gradient;
};

// Throws NumericalError (iteration as given) on a non-finite view loss.
ReconEvaluation evaluate_recon(const TriMesh& mesh, const ViewTargets& targets, const CarveConfig& config,
                               int iteration = 0);

struct CarveResult {
  TriMesh mesh;
  LossReport report;
};

// Adam on vertex positions with periodic remeshing; moments follow the
// remesh correspondence. Throws NumericalError on a non-finite loss.
CarveResult carve(const TriMesh& mesh, const OrbitDataset& dataset, const CarveConfig& config);
CarveResult carve(const TriMesh& mesh, const ViewTargets& targets, const CarveConfig& config);

}  // namespace orbitcarve
