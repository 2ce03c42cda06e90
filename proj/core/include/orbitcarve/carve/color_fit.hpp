#pragma once

#include <vector>

#include "orbitcarve/carve/carve.hpp"

namespace orbitcarve {

struct ColorFitConfig {
  int iterations = 200;
  double lr_start = 5e-2;
  double lr_end = 1e-3;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double initial_color = 0.5;
  int render_size = 256;

  void validate() const;
};

struct ColorFitResult {
  TriMesh mesh;                        // input geometry with fitted colors in [0, 1]
  std::vector<double> loss;            // squared masked residual per iteration
  std::vector<double> loss_unsquared;  // unsquared form, same iterations
};

// Geometry stays fixed; hard-mode fragments are computed once and colors are
// fitted by Adam on sum_i sum_p M |I - I_hat|^2. Vertices seen by no pixel keep
// the initial color. Throws NumericalError on a non-finite loss.
ColorFitResult fit_colors(const TriMesh& mesh, const OrbitDataset& dataset, const ColorFitConfig& config = {});
ColorFitResult fit_colors(const TriMesh& mesh, const ViewTargets& targets, const ColorFitConfig& config = {});

}  // namespace orbitcarve
