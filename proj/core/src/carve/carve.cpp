#include "orbitcarve/carve/carve.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "adam.hpp"
#include "orbitcarve/carve/losses.hpp"
#include "orbitcarve/carve/remesh.hpp"
#include "orbitcarve/common/error.hpp"
#include "orbitcarve/common/log.hpp"
#include "orbitcarve/common/parallel.hpp"

namespace orbitcarve {

void CarveConfig::validate() const {
  if (iterations <= 0) throw InvariantError(fmt::format("iterations must be > 0 (got {})", iterations));
  if (!(lr_start > 0.0) || !(lr_end > 0.0)) throw InvariantError("learning rates must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw InvariantError("moment decays must be in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw InvariantError("epsilon must be positive");
  if (remesh_interval < 0) throw InvariantError("remesh interval must be >= 0");
  if (!(edge_end > 0.0) || !(edge_end <= edge_start)) {
    throw InvariantError(fmt::format("edge schedule needs 0 < end <= start (got {} -> {})", edge_start, edge_end));
  }
  if (!(edge_schedule_fraction > 0.0 && edge_schedule_fraction <= 1.0)) {
    throw InvariantError("edge schedule fraction must be in (0, 1]");
  }
  if (!(smoothing >= 0.0 && smoothing < 1.0)) {
    throw InvariantError(fmt::format("smoothing must be in [0, 1) (got {})", smoothing));
  }
  if (render_size <= 0) throw InvariantError("render size must be positive");
  if (!(mask_weight >= 0.0) || !(normal_weight >= 0.0)) throw InvariantError("loss weights must be >= 0");
  raster.validate();
}

double CarveConfig::learning_rate(int iteration) const {
  if (iterations <= 1) return lr_start;
  const double t = static_cast<double>(iteration) / (iterations - 1);
  return lr_start * std::pow(lr_end / lr_start, t);
}

double CarveConfig::target_edge(int iteration) const {
  const double span = edge_schedule_fraction * iterations;
  const double t = span > 0.0 ? std::min(1.0, iteration / span) : 1.0;
  return edge_start + (edge_end - edge_start) * t;
}

bool LossReport::decreased() const {
  return iterations.empty() || iterations.back().total <= iterations.front().total;
}

void write_loss_log(const LossReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << "iter,loss_mask,loss_normal,loss_total,verts\n";
  for (const IterationLoss& it : report.iterations) {
    out << fmt::format("{},{:.17g},{:.17g},{:.17g},{}\n", it.iteration, it.mask, it.normal, it.total, it.vertices);
  }
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
}

ViewTargets prepare_targets(const OrbitDataset& dataset, int render_size) {
  if (!dataset.has_images()) throw InvariantError("dataset images are not loaded");
  int factor = 1;
  if (render_size < dataset.width) {
    if (dataset.width % render_size != 0 || dataset.height % (dataset.width / render_size) != 0) {
      throw InvariantError(fmt::format("render size {} does not divide the {}x{} frames by an integer factor",
                                       render_size, dataset.width, dataset.height));
    }
    factor = dataset.width / render_size;
  }
  ViewTargets t;
  const int w = dataset.width / factor;
  const int h = dataset.height / factor;
  for (int v = 0; v < dataset.views(); ++v) {
    t.cameras.push_back(dataset.frames[v].camera.resized(w, h));
    t.masks.push_back(dataset.masks[v].downsampled(factor));
    NormalImage n = dataset.normals[v].downsampled(factor);
    renormalize_under_mask(n, t.masks.back());
    t.normals.push_back(std::move(n));
    if (v < static_cast<int>(dataset.rgb.size())) t.rgb.push_back(dataset.rgb[v].downsampled(factor));
  }
  return t;
}

ReconEvaluation evaluate_recon(const TriMesh& mesh, const ViewTargets& targets, const CarveConfig& config,
                               int iteration) {
  const std::size_t views = targets.cameras.size();
  std::vector<double> mask_parts(views), normal_parts(views);
  std::vector<std::vector<Vec3>> grads(views);
  const RasterConfig& raster = config.raster;
  const std::vector<MeshEdge> edges = mesh_edges(mesh);
  parallel_for_each_index(views, [&](std::size_t v) {
    const RenderOutput r = render(mesh, targets.cameras[v], raster, edges);
    UpstreamGradients up;
    mask_parts[v] = config.mask_weight * mask_loss(r.mask, targets.masks[v], &up.mask);
    normal_parts[v] = config.normal_weight * normal_loss(r.normal, targets.normals[v], targets.masks[v], &up.normal);
    for (double& g : up.mask.data()) g *= config.mask_weight;
    for (double& g : up.normal.data()) g *= config.normal_weight;
    grads[v] = render_backward(mesh, targets.cameras[v], raster, edges, r, up).vertices;
  });
  ReconEvaluation e;
  e.gradient.assign(mesh.vertices.size(), Vec3::Zero());
  for (std::size_t v = 0; v < views; ++v) {
    const double total = total_loss(mask_parts[v], normal_parts[v]);
    if (!std::isfinite(total)) {
      throw NumericalError("non-finite reconstruction loss", iteration, static_cast<int>(v));
    }
    e.mask += mask_parts[v];
    e.normal += normal_parts[v];
    e.view_totals.push_back(total);
    for (std::size_t i = 0; i < e.gradient.size(); ++i) e.gradient[i] += grads[v][i];
  }
  e.total = total_loss(e.mask, e.normal);
  return e;
}

CarveResult carve(const TriMesh& mesh, const OrbitDataset& dataset, const CarveConfig& config) {
  config.validate();
  return carve(mesh, prepare_targets(dataset, config.render_size), config);
}

CarveResult carve(const TriMesh& mesh, const ViewTargets& targets, const CarveConfig& config) {
  config.validate();
  mesh.validate();
  if (targets.cameras.size() < 2) throw InvariantError("carving needs at least 2 views");
  CarveResult result;
  TriMesh current = mesh;
  current.colors.clear();
  const bool remeshing = config.remesh_interval > 0;
  if (remeshing) current = remesh(current, config.edge_start, config.smoothing).mesh;
  detail::Adam adam(config.beta1, config.beta2, config.epsilon, current.vertices.size());

  for (int it = 0; it < config.iterations; ++it) {
    const ReconEvaluation e = evaluate_recon(current, targets, config, it + 1);
    result.report.iterations.push_back({it + 1, e.mask, e.normal, e.total, current.vertices.size()});
    if (it + 1 == config.iterations) result.report.final_view_losses = e.view_totals;
    adam.step(current.vertices, e.gradient, config.learning_rate(it));
    for (const Vec3& p : current.vertices) {
      if (!p.allFinite()) throw NumericalError("non-finite vertex after update", it + 1, -1);
    }
    if (remeshing && (it + 1) % config.remesh_interval == 0 && it + 1 < config.iterations) {
      RemeshResult r = remesh(current, config.target_edge(it + 1), config.smoothing);
      adam.remap(r.sources);
      current = std::move(r.mesh);
    }
    if ((it + 1) % 50 == 0 || it == 0) {
      log::debug(fmt::format("carve iter {}: mask {:.4f} normal {:.4f} total {:.4f} verts {}", it + 1, e.mask,
                             e.normal, e.total, current.vertices.size()));
    }
  }
  if (!result.report.decreased()) {
    log::warn(fmt::format("carve: final loss {:.6g} is above the first-iteration loss {:.6g}",
                          result.report.iterations.back().total, result.report.iterations.front().total));
  }
  result.mesh = std::move(current);
  return result;
}

}  // namespace orbitcarve
