#include "orbitcarve/carve/color_fit.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "adam.hpp"
#include "orbitcarve/carve/losses.hpp"
#include "orbitcarve/common/error.hpp"
#include "orbitcarve/common/parallel.hpp"

namespace orbitcarve {

void ColorFitConfig::validate() const {
  if (iterations < 0) throw InvariantError("color iterations must be >= 0");
  if (!(lr_start > 0.0) || !(lr_end > 0.0)) throw InvariantError("color learning rates must be positive");
  if (!(initial_color >= 0.0 && initial_color <= 1.0)) throw InvariantError("initial color must be in [0, 1]");
  if (render_size <= 0) throw InvariantError("render size must be positive");
}

ColorFitResult fit_colors(const TriMesh& mesh, const OrbitDataset& dataset, const ColorFitConfig& config) {
  config.validate();
  return fit_colors(mesh, prepare_targets(dataset, config.render_size), config);
}

ColorFitResult fit_colors(const TriMesh& mesh, const ViewTargets& targets, const ColorFitConfig& config) {
  config.validate();
  mesh.validate();
  const std::size_t views = targets.cameras.size();
  if (targets.rgb.size() != views) throw DimensionError("color fitting needs an RGB frame per view");

  ColorFitResult result;
  result.mesh = mesh;
  result.mesh.colors.assign(mesh.vertices.size(), Vec3::Constant(config.initial_color));

  RasterConfig hard;
  hard.mode = RasterMode::hard;
  std::vector<RenderOutput> fragments(views);
  parallel_for_each_index(views, [&](std::size_t v) { fragments[v] = render(mesh, targets.cameras[v], hard); });

  auto shade = [&](std::size_t v) {
    const RenderOutput& f = fragments[v];
    RgbImage img(f.width, f.height);
    for (std::size_t p = 0; p < f.pixel_count(); ++p) {
      const int id = f.face_id[p];
      if (id < 0) continue;
      const Face& t = mesh.faces[id];
      Vec3 c = Vec3::Zero();
      for (int k = 0; k < 3; ++k) c += f.weights[p][k] * result.mesh.colors[t[k]];
      img.set_pixel(p, c);
    }
    return img;
  };

  detail::Adam adam(config.beta1, config.beta2, config.epsilon, mesh.vertices.size());
  std::vector<double> losses(views), unsquared(views);
  std::vector<std::vector<Vec3>> grads(views);
  for (int it = 0; it < config.iterations; ++it) {
    parallel_for_each_index(views, [&](std::size_t v) {
      const RgbImage img = shade(v);
      RgbImage g;
      losses[v] = color_loss(img, targets.rgb[v], targets.masks[v], &g);
      unsquared[v] = color_loss_unsquared(img, targets.rgb[v], targets.masks[v]);
      grads[v] = color_gradient(mesh, fragments[v], g);
    });
    double total = 0.0, total_unsquared = 0.0;
    std::vector<Vec3> grad(mesh.vertices.size(), Vec3::Zero());
    for (std::size_t v = 0; v < views; ++v) {
      if (!std::isfinite(losses[v])) throw NumericalError("non-finite color loss", it + 1, static_cast<int>(v));
      total += losses[v];
      total_unsquared += unsquared[v];
      for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += grads[v][i];
    }
    result.loss.push_back(total);
    result.loss_unsquared.push_back(total_unsquared);
    const double t = config.iterations > 1 ? static_cast<double>(it) / (config.iterations - 1) : 0.0;
    adam.step(result.mesh.colors, grad, config.lr_start * std::pow(config.lr_end / config.lr_start, t));
  }
  for (Vec3& c : result.mesh.colors) c = c.cwiseMax(0.0).cwiseMin(1.0);
  return result;
}

}  // namespace orbitcarve
