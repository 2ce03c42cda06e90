#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "orbitcarve/common/error.hpp"
#include "orbitcarve/common/log.hpp"
#include "orbitcarve/common/parallel.hpp"
#include "orbitcarve/geometry/mesh_io.hpp"
#include "orbitcarve/metrics/clip_score.hpp"
#include "orbitcarve/metrics/report.hpp"
#include "orbitcarve/pipeline/reconstruct.hpp"
#include "orbitcarve/raster/rasterizer.hpp"
#include "orbitcarve/synth/dataset.hpp"
#include "orbitcarve/synth/png_io.hpp"
#include "orbitcarve/synth/primitives.hpp"

namespace orbitcarve::cli {
namespace {

namespace fs = std::filesystem;

constexpr int kUsage = 2;
constexpr int kFailure = 1;

// Thrown by command bodies for argument combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenArgs {
  std::string shape = "sphere";
  std::string mesh;
  int subdivision = 4;
  int views = 36;
  int size = 256;
  double radius = 4.0;
  double elevation = 20.0;
  double azimuth = 0.0;
  double fov = 50.0;
  std::string out;
  std::string name = "synthetic";
};

struct ReconArgs {
  std::string dataset;
  std::string out;
  std::string config;
  std::string init;
  std::string init_mesh;
  std::string cloud;
  std::optional<int> iters;
  std::optional<int> render_size;
  std::optional<std::uint64_t> seed;
  bool no_colors = false;
};

struct EvalArgs {
  std::string pred;
  std::string gt;
  std::string dataset;
  std::string prompt;
  std::string report;
  std::size_t samples = 20000;
  std::uint64_t seed = 0;
};

struct RenderArgs {
  std::string mesh;
  std::string dataset;
  std::string out;
  std::string channel = "rgb";
};

int cmd_gen_synthetic(const GenArgs& a) {
  TriMesh mesh = a.mesh.empty() ? make_primitive(parse_primitive_kind(a.shape), a.subdivision) : load_mesh(a.mesh);
  mesh.validate();
  const Normalization norm = fit_normalization(mesh.vertices);
  for (Vec3& v : mesh.vertices) v = norm.apply(v);

  OrbitRig rig;
  rig.views = a.views;
  rig.width = a.size;
  rig.height = a.size;
  rig.radius = a.radius;
  rig.elevation_deg = a.elevation;
  rig.azimuth_start_deg = a.azimuth;
  rig.fov_y_deg = a.fov;
  rig.validate();

  fs::create_directories(a.out);
  const OrbitDataset ds = generate_dataset(mesh, rig, a.out, a.name);
  save_mesh(mesh, fs::path(a.out) / "gt.ply");
  fmt::print("{}\n", (fs::path(a.out) / "manifest.json").string());
  log::info(fmt::format("{} views of {} written; ground-truth mesh at {}", ds.views(),
                        a.mesh.empty() ? a.shape : a.mesh, (fs::path(a.out) / "gt.ply").string()));
  return 0;
}

int cmd_reconstruct(const ReconArgs& a, int threads) {
  PipelineConfig config;
  try {
    if (!a.config.empty()) config = load_pipeline_config(a.config);
    if (!a.dataset.empty()) config.dataset = a.dataset;
    if (!a.out.empty()) config.output = a.out;
    if (!a.init.empty()) config.init = parse_init_method(a.init);
    if (!a.init_mesh.empty()) config.init_mesh = a.init_mesh;
    if (!a.cloud.empty()) config.cloud = a.cloud;
    if (a.iters) config.carve.iterations = *a.iters;
    if (a.render_size) {
      config.carve.render_size = *a.render_size;
      config.color.render_size = *a.render_size;
    }
    if (a.seed) config.seed = *a.seed;
    if (a.no_colors) config.fit_colors = false;
    if (threads > 0) config.threads = threads;
    config.validate();
  } catch (const InvariantError& e) {
    throw UsageError(e.what());
  }
  const ReconstructResult r = reconstruct(config);
  const ReconstructOutputs out = reconstruct_outputs(config.output);
  const double final_loss = r.loss.iterations.empty() ? 0.0 : r.loss.iterations.back().total;
  fmt::print("{}\n", out.mesh.string());
  log::info(fmt::format("{} vertices, {} faces, final loss {:.6g}, {:.1f} s", r.mesh.vertices.size(),
                        r.mesh.faces.size(), final_loss, r.wall_seconds));
  return 0;
}

int cmd_eval(const EvalArgs& a) {
  if (!a.prompt.empty() && a.dataset.empty()) throw UsageError("--prompt needs --dataset");
  if (a.samples == 0) throw UsageError("--samples must be positive");
  const TriMesh pred = load_mesh(a.pred);
  const TriMesh gt = load_mesh(a.gt);
  std::optional<OrbitDataset> ds;
  if (!a.dataset.empty()) ds = load_dataset(a.dataset);
  EvalReport report = evaluate_meshes(pred, gt, a.samples, a.seed, ds ? &*ds : nullptr);
  if (!a.prompt.empty()) {
    RasterConfig hard;
    hard.mode = RasterMode::hard;
    std::vector<RgbImage> views;
    for (const Camera& c : ds->cameras()) views.push_back(render(pred, c, hard).color);
    report.clip_score = clip_score(load_rgb_png(a.prompt), views, ToyEmbeddingProvider());
  }
  const fs::path report_path =
      a.report.empty() ? fs::path(a.pred).parent_path() / (fs::path(a.pred).stem().string() + ".eval.json")
                       : fs::path(a.report);
  write_eval_report(report, report_path);
  fmt::print("{}", format_eval_table(report));
  fmt::print("report: {}\n", report_path.string());
  return 0;
}

int cmd_render(const RenderArgs& a) {
  const TriMesh mesh = load_mesh(a.mesh);
  const OrbitDataset ds = load_manifest(a.dataset);
  fs::create_directories(a.out);
  RasterConfig hard;
  hard.mode = RasterMode::hard;
  const std::vector<Camera> cameras = ds.cameras();
  for (std::size_t k = 0; k < cameras.size(); ++k) {
    const RenderOutput r = render(mesh, cameras[k], hard);
    const fs::path path = fs::path(a.out) / fmt::format("frame_{:03d}_{}.png", k, a.channel);
    if (a.channel == "rgb") {
      save_rgb_png(r.color, path);
    } else if (a.channel == "mask") {
      save_mask_png(r.mask, path);
    } else if (a.channel == "normal") {
      save_normal_png(r.normal, path);
    } else {
      save_depth_png(r.depth, r.width, r.height, path);
    }
  }
  fmt::print("{} {} frames written to {}\n", cameras.size(), a.channel, a.out);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Multi-view orbit images to textured mesh"};
  app.name(args.empty() ? "orbitcarve" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);

  int threads = 0;
  bool quiet = false;
  app.add_option("--threads", threads, "Worker threads (default: ORBITCARVE_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("-q,--quiet", quiet, "Only print errors");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-synthetic", "Render a synthetic orbit dataset");
  gen_cmd->add_option("--shape", gen.shape, "sphere, cube, capsule or torus")
      ->check(CLI::IsMember({"sphere", "cube", "capsule", "torus"}));
  gen_cmd->add_option("--mesh", gen.mesh, "Mesh file to render instead of a primitive")->check(CLI::ExistingFile);
  gen_cmd->add_option("--subdivision", gen.subdivision, "Primitive subdivision level")->check(CLI::Range(0, 7));
  gen_cmd->add_option("--views", gen.views, "Number of orbit views")->check([](const std::string& s) {
    try {
      return std::stoi(s) >= 2 ? std::string() : std::string("views must be ≥ 2");
    } catch (const std::exception&) {
      return std::string("views must be an integer");
    }
  });
  gen_cmd->add_option("--size", gen.size, "Square image size in pixels")->check(CLI::Range(8, 8192));
  gen_cmd->add_option("--radius", gen.radius, "Orbit radius")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--elevation", gen.elevation, "Orbit elevation in degrees")->check(CLI::Range(-89.0, 89.0));
  gen_cmd->add_option("--azimuth", gen.azimuth, "Azimuth of the first view in degrees");
  gen_cmd->add_option("--fov", gen.fov, "Vertical field of view in degrees")->check(CLI::Range(1.0, 179.0));
  gen_cmd->add_option("--name", gen.name, "Dataset name");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  ReconArgs rec;
  auto* rec_cmd = app.add_subcommand("reconstruct", "Carve a textured mesh from an orbit dataset");
  rec_cmd->add_option("--dataset", rec.dataset, "Dataset manifest or directory");
  rec_cmd->add_option("--out", rec.out, "Output mesh (.ply or .obj)");
  rec_cmd->add_option("--config", rec.config, "JSON pipeline config; flags override it")->check(CLI::ExistingFile);
  rec_cmd->add_option("--init", rec.init, "auto, poisson, hull or mesh-file")
      ->check(CLI::IsMember({"auto", "poisson", "hull", "mesh-file"}));
  rec_cmd->add_option("--init-mesh", rec.init_mesh, "Initial mesh for --init mesh-file");
  rec_cmd->add_option("--cloud", rec.cloud, "Oriented point cloud (PLY) for Poisson init");
  rec_cmd->add_option("--iters", rec.iters, "Carve iterations");
  rec_cmd->add_option("--render-size", rec.render_size, "Optimization render size");
  rec_cmd->add_option("--seed", rec.seed, "Seed recorded with the run");
  rec_cmd->add_flag("--no-colors", rec.no_colors, "Skip per-vertex color fitting");

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Compare a mesh against ground truth");
  eval_cmd->add_option("--pred", ev.pred, "Predicted mesh")->required();
  eval_cmd->add_option("--gt", ev.gt, "Ground-truth mesh")->required();
  eval_cmd->add_option("--dataset", ev.dataset, "Dataset for silhouette IoU");
  eval_cmd->add_option("--prompt", ev.prompt, "Prompt image (PNG) for the clip score; needs --dataset");
  eval_cmd->add_option("--samples", ev.samples, "Surface samples per mesh");
  eval_cmd->add_option("--seed", ev.seed, "Sampling seed");
  eval_cmd->add_option("--report", ev.report, "Report path (default: <pred>.eval.json)");

  RenderArgs rd;
  auto* render_cmd = app.add_subcommand("render", "Render a mesh from every dataset camera");
  render_cmd->add_option("--mesh", rd.mesh, "Mesh to render")->required();
  render_cmd->add_option("--dataset", rd.dataset, "Dataset manifest or directory")->required();
  render_cmd->add_option("--out", rd.out, "Output directory")->required();
  render_cmd->add_option("--channel", rd.channel, "rgb, mask, normal or depth")
      ->check(CLI::IsMember({"rgb", "mask", "normal", "depth"}));

  std::vector<const char*> argv;
  for (const std::string& s : args) argv.push_back(s.c_str());
  if (argv.empty()) argv.push_back("orbitcarve");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (app.exit(e) == 0) return 0;
    for (const CLI::App* sub : app.get_subcommands({})) {
      if (sub->parsed()) std::fprintf(stderr, "\n%s", sub->help().c_str());
    }
    return kUsage;
  }

  log::set_verbose(!quiet);
  try {
    ThreadLimit limit(threads);
    if (*gen_cmd) return cmd_gen_synthetic(gen);
    if (*rec_cmd) return cmd_reconstruct(rec, threads);
    if (*eval_cmd) return cmd_eval(ev);
    return cmd_render(rd);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\nRun with --help for usage.\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailure;
  }
}

}  // namespace orbitcarve::cli
