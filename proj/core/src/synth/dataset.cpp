#include "orbitcarve/synth/dataset.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "../common/json_util.hpp"
#include "orbitcarve/common/error.hpp"
#include "orbitcarve/common/log.hpp"
#include "orbitcarve/common/parallel.hpp"
#include "orbitcarve/raster/rasterizer.hpp"
#include "orbitcarve/synth/png_io.hpp"

namespace orbitcarve {

using detail::Json;

Camera Normalization::apply(const Camera& camera) const {
  // x_cam scales by `scale`, which leaves every projection unchanged.
  Camera c = camera;
  c.translation = scale * camera.translation - camera.rotation * translation;
  return c;
}

Normalization fit_normalization(const std::vector<Vec3>& points) {
  const BoundingBox box = bounding_box(points);
  const double extent = box.extent().maxCoeff();
  if (!(extent > 0.0)) throw InvariantError("cannot normalize a degenerate bounding box");
  Normalization n;
  n.scale = 2.0 / extent;
  n.translation = -n.scale * box.center();
  return n;
}

std::vector<Camera> OrbitDataset::cameras() const {
  std::vector<Camera> out;
  out.reserve(frames.size());
  for (const FrameRecord& f : frames) out.push_back(f.camera);
  return out;
}

namespace {

std::string frame_name(int k, const char* channel) { return fmt::format("frame_{:03d}_{}.png", k, channel); }

Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from_json(const Json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() || !j[2].is_number()) {
    throw InvariantError(fmt::format("{}: expected 3 numbers", context));
  }
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

std::string require_string(const Json& j, const char* key, int frame) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw FrameError(frame, fmt::format("missing '{}' path", key));
  }
  return j.at(key).get<std::string>();
}

}  // namespace

void save_manifest(const OrbitDataset& dataset, const std::filesystem::path& manifest) {
  Json j;
  j["name"] = dataset.name;
  j["width"] = dataset.width;
  j["height"] = dataset.height;
  j["units"] = dataset.units;
  if (dataset.rig) {
    const OrbitRig& r = *dataset.rig;
    Json rig;
    rig["radius"] = r.radius;
    rig["elevation"] = r.elevation_deg;
    rig["azimuth_start"] = r.azimuth_start_deg;
    rig["center"] = vec_json(r.center);
    rig["fov_y"] = r.fov_y_deg;
    rig["views"] = r.views;
    j["rig"] = rig;
  }
  if (dataset.normalization) {
    Json n;
    n["scale"] = dataset.normalization->scale;
    n["translation"] = vec_json(dataset.normalization->translation);
    j["normalization"] = n;
  }
  Json frames = Json::array();
  for (const FrameRecord& f : dataset.frames) {
    Json fj;
    fj["rgb"] = f.rgb;
    fj["mask"] = f.mask;
    fj["normal"] = f.normal;
    fj["camera"] = detail::camera_to_json(f.camera, false);
    frames.push_back(fj);
  }
  j["frames"] = frames;
  std::ofstream out(manifest, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write manifest {}", manifest.string()));
  out << j.dump(2) << '\n';
  if (!out) throw IoError(fmt::format("cannot write manifest {}", manifest.string()));
}

OrbitDataset load_manifest(const std::filesystem::path& path) {
  std::error_code ec;
  const std::filesystem::path manifest =
      std::filesystem::is_directory(path, ec) ? path / "manifest.json" : path;
  std::ifstream in(manifest, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open manifest {}", manifest.string()));
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(manifest.string(), e.what(), static_cast<long long>(e.byte), true);
  }
  const std::string ctx = manifest.string();
  if (!j.is_object()) throw InvariantError(fmt::format("{}: manifest must be an object", ctx));

  OrbitDataset ds;
  ds.root = manifest.parent_path();
  ds.name = j.value("name", std::string("dataset"));
  ds.width = static_cast<int>(detail::require_number(j, "width", ctx));
  ds.height = static_cast<int>(detail::require_number(j, "height", ctx));
  if (ds.width <= 0 || ds.height <= 0) {
    throw InvariantError(fmt::format("{}: image size must be positive ({}x{})", ctx, ds.width, ds.height));
  }
  if (j.contains("units")) ds.units = j.at("units").get<std::string>();
  if (j.contains("rig")) {
    const Json& r = j.at("rig");
    OrbitRig rig;
    rig.radius = detail::require_number(r, "radius", ctx + " rig");
    rig.elevation_deg = detail::require_number(r, "elevation", ctx + " rig");
    rig.azimuth_start_deg = detail::require_number(r, "azimuth_start", ctx + " rig");
    rig.center = vec_from_json(r.value("center", Json::array({0.0, 0.0, 0.0})), ctx + " rig center");
    rig.fov_y_deg = detail::require_number(r, "fov_y", ctx + " rig");
    rig.views = static_cast<int>(detail::require_number(r, "views", ctx + " rig"));
    rig.width = ds.width;
    rig.height = ds.height;
    ds.rig = rig;
  }
  if (j.contains("normalization")) {
    const Json& n = j.at("normalization");
    Normalization norm;
    norm.scale = detail::require_number(n, "scale", ctx + " normalization");
    norm.translation = vec_from_json(n.at("translation"), ctx + " normalization translation");
    if (!(norm.scale > 0.0)) throw InvariantError(fmt::format("{}: normalization scale must be positive", ctx));
    ds.normalization = norm;
  }
  if (!j.contains("frames") || !j.at("frames").is_array()) {
    throw InvariantError(fmt::format("{}: missing 'frames' array", ctx));
  }
  const Json& frames = j.at("frames");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const int k = static_cast<int>(i);
    const Json& fj = frames[i];
    if (!fj.is_object()) throw FrameError(k, "record must be an object");
    FrameRecord f;
    f.rgb = require_string(fj, "rgb", k);
    f.mask = require_string(fj, "mask", k);
    f.normal = require_string(fj, "normal", k);
    if (!fj.contains("camera")) throw FrameError(k, "missing camera");
    try {
      f.camera = detail::camera_from_json(fj.at("camera"), ds.width, ds.height, "camera");
    } catch (const InvariantError& e) {
      throw FrameError(k, fmt::format("invalid {}", e.what()));
    }
    if (f.camera.width != ds.width || f.camera.height != ds.height) {
      throw FrameError(k, fmt::format("camera is {}x{}, dataset is {}x{}", f.camera.width,
                                      f.camera.height, ds.width, ds.height));
    }
    ds.frames.push_back(std::move(f));
  }
  if (ds.frames.size() < 2) {
    throw InvariantError(fmt::format("{}: dataset needs at least 2 frames (has {})", ctx, ds.frames.size()));
  }
  return ds;
}

OrbitDataset load_dataset(const std::filesystem::path& manifest) {
  OrbitDataset ds = load_manifest(manifest);
  const std::size_t n = ds.frames.size();
  ds.rgb.resize(n);
  ds.masks.resize(n);
  ds.normals.resize(n);
  // Sequential so the first failing frame is the one reported.
  for (std::size_t i = 0; i < n; ++i) {
    const int k = static_cast<int>(i);
    const FrameRecord& f = ds.frames[i];
    auto load = [&](const std::string& rel, const char* what, auto loader) {
      const std::filesystem::path p = ds.root / rel;
      if (!std::filesystem::exists(p)) throw FrameError(k, fmt::format("{} missing ({})", what, p.string()));
      try {
        auto image = loader(p);
        if (!image.same_size(ds.width, ds.height)) {
          throw FrameError(k, fmt::format("{} is {}x{}, expected {}x{}", what, image.width(), image.height(),
                                          ds.width, ds.height));
        }
        return image;
      } catch (const IoError& e) {
        throw FrameError(k, fmt::format("{} unreadable: {}", what, e.what()));
      }
    };
    ds.rgb[i] = load(f.rgb, "RGB image", load_rgb_png);
    ds.masks[i] = load(f.mask, "mask", load_mask_png);
    ds.normals[i] = load(f.normal, "normal map", load_normal_png);
    renormalize_under_mask(ds.normals[i], ds.masks[i]);
  }
  return ds;
}

OrbitDataset generate_dataset(const TriMesh& mesh, const OrbitRig& rig,
                              const std::filesystem::path& out_dir, const std::string& name) {
  mesh.validate();
  const std::vector<Camera> cameras = build_orbit_cameras(rig);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError(fmt::format("cannot create {}: {}", out_dir.string(), ec.message()));

  TriMesh shaded = mesh;
  if (!shaded.has_colors()) shaded.colors.assign(shaded.vertices.size(), Vec3::Constant(0.7));
  RasterConfig cfg;
  cfg.mode = RasterMode::hard;

  OrbitDataset ds;
  ds.name = name;
  ds.width = rig.width;
  ds.height = rig.height;
  ds.rig = rig;
  ds.normalization = Normalization{};
  ds.frames.resize(cameras.size());
  parallel_for_each_index(cameras.size(), [&](std::size_t i) {
    const int k = static_cast<int>(i);
    const RenderOutput r = render(shaded, cameras[i], cfg);
    FrameRecord& f = ds.frames[i];
    f.rgb = frame_name(k, "rgb");
    f.mask = frame_name(k, "mask");
    f.normal = frame_name(k, "normal");
    f.camera = cameras[i];
    save_rgb_png(r.color, out_dir / f.rgb);
    save_mask_png(r.mask, out_dir / f.mask);
    save_normal_png(r.normal, out_dir / f.normal);
  });
  const std::filesystem::path manifest = out_dir / "manifest.json";
  save_manifest(ds, manifest);
  return load_dataset(manifest);
}

double normal_preflight_angle(const TriMesh& mesh, const OrbitDataset& dataset) {
  if (!dataset.has_images()) throw InvariantError("normal preflight needs a loaded dataset");
  RasterConfig cfg;
  cfg.mode = RasterMode::hard;
  const std::size_t n = dataset.frames.size();
  std::vector<double> sums(n, 0.0);
  std::vector<double> counts(n, 0.0);
  parallel_for_each_index(n, [&](std::size_t v) {
    const RenderOutput r = render(mesh, dataset.frames[v].camera, cfg);
    for (std::size_t p = 0; p < r.pixel_count(); ++p) {
      if (r.face_id[p] < 0 || dataset.masks[v][p] < 0.5) continue;
      const Vec3 a = r.normal.pixel(p);
      const Vec3 b = dataset.normals[v].pixel(p);
      if (b.norm() == 0.0) continue;
      sums[v] += std::acos(std::clamp(a.dot(b.normalized()), -1.0, 1.0));
      counts[v] += 1.0;
    }
  });
  const double count = deterministic_sum(counts);
  if (count == 0.0) return 0.0;
  return deterministic_sum(sums) / count * 180.0 / std::numbers::pi;
}

bool check_normal_convention(const TriMesh& mesh, const OrbitDataset& dataset, double threshold_deg) {
  const double angle = normal_preflight_angle(mesh, dataset);
  if (angle > threshold_deg) {
    log::warn(fmt::format(
        "normal maps disagree with the initial mesh by {:.1f} degrees on average (threshold {:.1f}); "
        "normals are expected in camera space (x right, y down, z forward)",
        angle, threshold_deg));
    return false;
  }
  return true;
}

}  // namespace orbitcarve
