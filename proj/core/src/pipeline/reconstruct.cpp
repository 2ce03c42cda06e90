#include "orbitcarve/pipeline/reconstruct.hpp"

#include <chrono>
#include <fstream>

#include <fmt/format.h>

#include "../common/json_util.hpp"
#include "orbitcarve/common/log.hpp"
#include "orbitcarve/common/parallel.hpp"
#include "orbitcarve/geometry/mesh_io.hpp"
#include "orbitcarve/init/poisson.hpp"
#include "orbitcarve/init/visual_hull.hpp"
#include "orbitcarve/synth/dataset.hpp"

namespace orbitcarve {
namespace {

using detail::Json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

template <typename F>
auto run_stage(const char* stage, F&& body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const NumericalError& e) {
    throw StageError(stage, fmt::format("{} (iteration {}, view {})", e.what(), e.iteration(), e.view()));
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << text;
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
}

std::string loss_report_json(const ReconstructResult& r) {
  Json iters = Json::array();
  for (const IterationLoss& l : r.loss.iterations) {
    iters.push_back({{"iter", l.iteration},
                     {"loss_mask", l.mask},
                     {"loss_normal", l.normal},
                     {"loss_total", l.total},
                     {"verts", l.vertices}});
  }
  Json j;
  j["iterations"] = iters;
  j["final_view_losses"] = r.loss.final_view_losses;
  j["decreased"] = r.loss.decreased();
  j["color_loss"] = r.color_loss;
  return j.dump(2) + "\n";
}

}  // namespace

ReconstructOutputs reconstruct_outputs(const fs::path& mesh_path) {
  const fs::path dir = mesh_path.parent_path();
  const std::string stem = mesh_path.stem().string();
  return {mesh_path, dir / (stem + ".loss.csv"), dir / (stem + ".report.json"), dir / (stem + ".summary.json")};
}

ReconstructResult reconstruct(const PipelineConfig& config) {
  const Clock::time_point start = Clock::now();
  run_stage("config", [&] {
    config.validate();
    return 0;
  });
  ThreadLimit threads(config.threads);
  ReconstructResult result;

  OrbitDataset dataset = run_stage("load dataset", [&] { return load_dataset(config.dataset); });
  OrientedPointCloud cloud;
  if (!config.cloud.empty()) {
    cloud = run_stage("load point cloud", [&] { return load_point_cloud(config.cloud); });
  }

  const Normalization norm = run_stage("normalize", [&] {
    if (dataset.normalization) return *dataset.normalization;
    if (!cloud.points.empty()) return fit_normalization(cloud.points);
    log::warn("dataset has no normalization and no point cloud was given; assuming an identity normalization");
    return Normalization{};
  });
  for (FrameRecord& f : dataset.frames) f.camera = norm.apply(f.camera);
  for (Vec3& p : cloud.points) p = norm.apply(p);

  result.init_used = config.init;
  if (result.init_used == InitMethod::automatic) {
    result.init_used = cloud.points.empty() ? InitMethod::hull : InitMethod::poisson;
  }
  TriMesh mesh = run_stage("init", [&] {
    switch (result.init_used) {
      case InitMethod::poisson: {
        PoissonOptions opt;
        opt.resolution = config.grid_resolution;
        return poisson_mesh(cloud, opt);
      }
      case InitMethod::mesh_file: {
        TriMesh m = load_mesh(config.init_mesh);
        for (Vec3& v : m.vertices) v = norm.apply(v);
        m.colors.clear();
        return m;
      }
      default:
        return visual_hull_mesh(dataset.masks, dataset.cameras(), config.grid_resolution);
    }
  });
  result.init_vertices = mesh.vertices.size();
  result.init_faces = mesh.faces.size();
  log::info(fmt::format("init ({}): {} vertices, {} faces", to_string(result.init_used), mesh.vertices.size(),
                        mesh.faces.size()));

  result.preflight_angle_deg = run_stage("preflight", [&] {
    const double angle = normal_preflight_angle(mesh, dataset);
    check_normal_convention(mesh, dataset);
    return angle;
  });

  CarveResult carved = run_stage("carve", [&] {
    const ViewTargets targets = prepare_targets(dataset, config.carve.render_size);
    return carve(mesh, targets, config.carve);
  });
  result.loss = std::move(carved.report);
  if (!result.loss.decreased()) log::warn("final carve loss is above the first-iteration loss");
  mesh = std::move(carved.mesh);

  if (config.fit_colors) {
    ColorFitResult colored = run_stage("color fit", [&] {
      const ViewTargets targets = prepare_targets(dataset, config.color.render_size);
      return fit_colors(mesh, targets, config.color);
    });
    mesh = std::move(colored.mesh);
    result.color_loss = std::move(colored.loss);
  }

  for (Vec3& v : mesh.vertices) v = norm.invert(v);
  result.mesh = std::move(mesh);

  const ReconstructOutputs out = reconstruct_outputs(config.output);
  run_stage("write outputs", [&] {
    std::error_code ec;
    if (!out.mesh.parent_path().empty()) fs::create_directories(out.mesh.parent_path(), ec);
    save_mesh(result.mesh, out.mesh);
    write_loss_log(result.loss, out.loss_log);
    write_text(out.report, loss_report_json(result));
    result.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    Json summary;
    summary["config"] = Json::parse(pipeline_config_json(config));
    summary["init_used"] = to_string(result.init_used);
    summary["init_vertices"] = result.init_vertices;
    summary["init_faces"] = result.init_faces;
    summary["preflight_angle_deg"] = result.preflight_angle_deg;
    summary["final_vertices"] = result.mesh.vertices.size();
    summary["final_faces"] = result.mesh.faces.size();
    summary["final_loss"] = result.loss.iterations.empty() ? 0.0 : result.loss.iterations.back().total;
    summary["threads"] = threads.threads();
    summary["wall_seconds"] = result.wall_seconds;
    write_text(out.summary, summary.dump(2) + "\n");
    return 0;
  });
  return result;
}

}  // namespace orbitcarve
