#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "orbitcarve/geometry/camera.hpp"
#include "orbitcarve/geometry/image.hpp"
#include "orbitcarve/geometry/mesh.hpp"
#include "orbitcarve/init/orbit.hpp"

namespace orbitcarve {

// Uniform scale and translation taking dataset world coordinates into the
// normalized [-1, 1]^3 box: x_n = scale * x + translation.
struct Normalization {
  double scale = 1.0;
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& x) const { return scale * x + translation; }
  Vec3 invert(const Vec3& x) const { return (x - translation) / scale; }
  // Same view expressed in normalized coordinates.
  Camera apply(const Camera& camera) const;
};

// Normalization mapping the bounding box of `points` to a box centered at the
// origin whose largest side is 2.
Normalization fit_normalization(const std::vector<Vec3>& points);

struct FrameRecord {
  std::string rgb;     // paths relative to the manifest directory
  std::string mask;
  std::string normal;
  Camera camera;
};

struct OrbitDataset {
  std::string name;
  int width = 0;
  int height = 0;
  std::vector<FrameRecord> frames;
  std::optional<OrbitRig> rig;
  std::optional<Normalization> normalization;
  std::string units = "normalized box [-1, 1]^3";

  // Filled by load_dataset; empty for a manifest-only read.
  std::filesystem::path root;
  std::vector<RgbImage> rgb;
  std::vector<MaskImage> masks;
  std::vector<NormalImage> normals;

  int views() const { return static_cast<int>(frames.size()); }
  std::vector<Camera> cameras() const;
  bool has_images() const { return !masks.empty(); }
};

// Renders `mesh` in hard mode from every rig camera and writes
// frame_NNN_{rgb,mask,normal}.png plus manifest.json into out_dir. Returns the
// dataset with its decoded images.
OrbitDataset generate_dataset(const TriMesh& mesh, const OrbitRig& rig,
                              const std::filesystem::path& out_dir,
                              const std::string& name = "synthetic");

// Manifest only: parse and validate, no image decoding. Errors name the frame.
// `manifest` may also be a dataset directory holding manifest.json.
OrbitDataset load_manifest(const std::filesystem::path& manifest);

// Manifest plus decoded frames; normals renormalized under the mask.
OrbitDataset load_dataset(const std::filesystem::path& manifest);

void save_manifest(const OrbitDataset& dataset, const std::filesystem::path& manifest);

// Mean angle in degrees between provided and rendered normals, over pixels
// where both the target mask and the rendering of `mesh` cover.
double normal_preflight_angle(const TriMesh& mesh, const OrbitDataset& dataset);

inline constexpr double kNormalPreflightThresholdDeg = 30.0;

// Logs a convention warning and returns false when the preflight angle exceeds the threshold.
bool check_normal_convention(const TriMesh& mesh, const OrbitDataset& dataset,
                             double threshold_deg = kNormalPreflightThresholdDeg);

}  // namespace orbitcarve
