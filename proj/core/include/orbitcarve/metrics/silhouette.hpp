#pragma once

#include <vector>

#include "orbitcarve/geometry/image.hpp"
#include "orbitcarve/geometry/mesh.hpp"
#include "orbitcarve/synth/dataset.hpp"

namespace orbitcarve {

// IoU of the two masks thresholded at 0.5. An empty union gives 1.0 and sets
// *empty_union when provided. Throws DimensionError on a size mismatch.
double mask_iou(const MaskImage& a, const MaskImage& b, bool* empty_union = nullptr);

struct SilhouetteResult {
  std::vector<double> per_view;
  std::vector<bool> empty_union;
  double mean = 0.0;
};

// Hard-mode render of `mesh` from every dataset camera against the dataset masks.
SilhouetteResult silhouette_iou(const TriMesh& mesh, const OrbitDataset& dataset);

}  // namespace orbitcarve
