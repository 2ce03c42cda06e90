#pragma once

#include <array>
#include <vector>

#include "orbitcarve/geometry/camera.hpp"
#include "orbitcarve/geometry/image.hpp"
#include "orbitcarve/geometry/mesh.hpp"

namespace orbitcarve {

enum class RasterMode { soft, hard };

struct RasterConfig {
  // Soft-edge width in pixels.
  double sigma = 0.5;
  double near_plane = kDefaultNearPlane;
  RasterMode mode = RasterMode::soft;
  // The soft mask is blended only within support_sigmas * sigma of the
  // silhouette; the sigmoid is renormalized to reach exactly 0 and 1 there.
  double support_sigmas = 3.0;

  void validate() const;
};

// Per-pixel buffers are row-major, index y * width + x.
struct RenderOutput {
  int width = 0;
  int height = 0;
  MaskImage mask;      // soft coverage in [0, 1]; exactly {0, 1} in hard mode
  NormalImage normal;  // camera space, unit where face_id >= 0, zero elsewhere
  RgbImage color;      // interpolated vertex colors, zero where no face or no colors
  std::vector<double> depth;                  // camera-space z, +inf on background
  std::vector<int> face_id;                   // winning face, -1 on background
  std::vector<std::array<double, 3>> weights; // perspective-correct barycentrics of face_id

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

// dL/d(render channels). An empty image stands for an all-zero gradient.
struct UpstreamGradients {
  MaskImage mask;
  NormalImage normal;
  RgbImage color;
};

struct RenderGradients {
  std::vector<Vec3> vertices;  // aligned with mesh.vertices
  std::vector<Vec3> colors;    // aligned with mesh.vertices (zero when the mesh has no colors)
};

// Differentiable rasterization of `mesh` seen from `camera`.
//
// Hard channels (normal, color, depth, face_id, weights) come from z-buffered
// rasterization of pixel centers with perspective-correct barycentrics; depth
// ties keep the lower face index. Back faces are not culled. Faces with a
// vertex at or behind the near plane are skipped.
//
// The soft mask is a sigmoid of the signed screen distance D to the visible
// silhouette: contour edges (both incident faces project to the same side of
// the edge, or the edge has a single face) whose outer side is background.
// D is positive at covered pixel centers and negative elsewhere, and
//   mask = (sigmoid(D / sigma) - sigmoid(-k)) / (sigmoid(k) - sigmoid(-k)),
// k = support_sigmas, so mask is exactly 0.5 on the silhouette and equals the
// hard coverage farther than k * sigma from it.
RenderOutput render(const TriMesh& mesh, const Camera& camera, const RasterConfig& config);

// Same, with edges precomputed by mesh_edges(mesh).
RenderOutput render(const TriMesh& mesh, const Camera& camera, const RasterConfig& config,
                    const std::vector<MeshEdge>& edges);

// Vertex-position and vertex-color gradients of a scalar loss given its
// gradients with respect to the rendered channels.
//
// The soft mask gradient flows into the endpoints of the nearest silhouette
// edge of each blended pixel. Normal and color gradients flow through
// barycentric weights, interpolated attributes and (for normals) the
// area-weighted vertex normals, only at pixels with a face; coverage changes of
// the hard channels carry no gradient.
//
// Throws DimensionError when a non-empty upstream image does not match the camera size.
RenderGradients render_backward(const TriMesh& mesh, const Camera& camera,
                                const RasterConfig& config, const UpstreamGradients& upstream);

// Same, reusing the buffers of a forward pass made with identical arguments.
RenderGradients render_backward(const TriMesh& mesh, const Camera& camera,
                                const RasterConfig& config, const RenderOutput& forward,
                                const UpstreamGradients& upstream);

RenderGradients render_backward(const TriMesh& mesh, const Camera& camera,
                                const RasterConfig& config, const std::vector<MeshEdge>& edges,
                                const RenderOutput& forward, const UpstreamGradients& upstream);

// Color-only gradient through the fragment buffers of `forward`; geometry is
// treated as fixed. Output is aligned with mesh.vertices.
std::vector<Vec3> color_gradient(const TriMesh& mesh, const RenderOutput& forward,
                                 const RgbImage& grad_color);

}  // namespace orbitcarve
