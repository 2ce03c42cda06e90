#include "orbitcarve/metrics/silhouette.hpp"

#include <string>

#include "orbitcarve/common/error.hpp"
#include "orbitcarve/common/parallel.hpp"
#include "orbitcarve/raster/rasterizer.hpp"

namespace orbitcarve {

double mask_iou(const MaskImage& a, const MaskImage& b, bool* empty_union) {
  if (!a.same_size(b)) {
    throw DimensionError("mask sizes differ: " + std::to_string(a.width()) + "x" +
                         std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                         std::to_string(b.height()));
  }
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < a.pixel_count(); ++i) {
    const bool pa = a[i] >= 0.5;
    const bool pb = b[i] >= 0.5;
    inter += pa && pb;
    uni += pa || pb;
  }
  if (empty_union) *empty_union = uni == 0;
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

SilhouetteResult silhouette_iou(const TriMesh& mesh, const OrbitDataset& dataset) {
  if (!dataset.has_images()) throw InvariantError("silhouette IoU needs a dataset with decoded masks");
  RasterConfig config;
  config.mode = RasterMode::hard;
  const std::vector<Camera> cameras = dataset.cameras();
  SilhouetteResult out;
  out.per_view.resize(cameras.size());
  std::vector<char> empty(cameras.size(), 0);
  parallel_for_each_index(cameras.size(), [&](std::size_t v) {
    const RenderOutput r = render(mesh, cameras[v], config);
    bool e = false;
    out.per_view[v] = mask_iou(r.mask, dataset.masks[v], &e);
    empty[v] = e;
  });
  out.empty_union.assign(empty.begin(), empty.end());
  out.mean = out.per_view.empty() ? 0.0 : deterministic_sum(out.per_view) / out.per_view.size();
  return out;
}

}  // namespace orbitcarve
