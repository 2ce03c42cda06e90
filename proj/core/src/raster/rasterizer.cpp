#include "orbitcarve/raster/rasterizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "orbitcarve/common/error.hpp"
#include "orbitcarve/common/parallel.hpp"

namespace orbitcarve {
namespace {

constexpr int kTile = 16;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDegenerateArea = 1e-12;

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// cross2(b - a, c - a) and its partial derivatives.
inline double area2(double ax, double ay, double bx, double by, double cx, double cy) {
  return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
}

// Only faces whose screen bounds contain a pixel center get a setup.
struct FaceSetup {
  bool degenerate = false;
  int v[3] = {0, 0, 0};
  double px[3] = {0, 0, 0};
  double py[3] = {0, 0, 0};
  double z[3] = {1, 1, 1};
  double area = 0.0;    // signed cross2(p1 - p0, p2 - p0)
  double orient = 1.0;  // sign of area
  int x0 = 0, x1 = -1, y0 = 0, y1 = -1;  // inclusive pixel range of the support
};

struct Setup {
  int width = 0;
  int height = 0;
  int tiles_x = 0;
  int tiles_y = 0;
  double sigma = 0.5;
  double cut = 0.0;  // soft blending radius in pixels, 0 in hard mode
  double s_lo = 0.0;  // sigmoid(-k)
  double s_span = 1.0;  // sigmoid(k) - sigmoid(-k)
  bool soft = true;
  std::vector<Vec3> cam;       // camera-space vertex positions
  std::vector<char> valid;     // in front of the near plane with a finite projection
  std::vector<Vec2> screen;    // projected positions of valid vertices
  std::vector<Vec3> accum;     // sum of incident area vectors (world)
  std::vector<Vec3> world_normals;
  std::vector<Vec3> cam_normals;
  std::vector<FaceSetup> faces;
  std::vector<int> slot;  // face index -> position in `faces`, -1 when it has no setup
  std::vector<std::vector<int>> bins;  // face indices per tile, ascending

  const FaceSetup& face(int f) const { return faces[static_cast<std::size_t>(slot[f])]; }
};

Setup make_setup(const TriMesh& mesh, const Camera& camera, const RasterConfig& config) {
  Setup s;
  s.width = camera.width;
  s.height = camera.height;
  s.tiles_x = (s.width + kTile - 1) / kTile;
  s.tiles_y = (s.height + kTile - 1) / kTile;
  s.soft = config.mode == RasterMode::soft;
  s.sigma = config.sigma;
  s.cut = s.soft ? config.support_sigmas * config.sigma : 0.0;
  s.s_lo = sigmoid(-config.support_sigmas);
  s.s_span = sigmoid(config.support_sigmas) - s.s_lo;

  const std::size_t nv = mesh.vertices.size();
  s.cam.resize(nv);
  s.valid.resize(nv);
  s.screen.resize(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    const Vec3 c = camera.to_camera(mesh.vertices[i]);
    s.cam[i] = c;
    s.screen[i] = Vec2(camera.fx * c.x() / c.z() + camera.cx, camera.fy * c.y() / c.z() + camera.cy);
    s.valid[i] = c.z() > config.near_plane && std::isfinite(s.screen[i].x() + s.screen[i].y());
  }

  s.accum.assign(nv, Vec3::Zero());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Vec3 a = face_area_vector(mesh, f);
    for (int v : mesh.faces[f]) s.accum[v] += a;
  }
  s.world_normals.resize(nv);
  s.cam_normals.resize(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    const double len = s.accum[i].norm();
    s.world_normals[i] = len > 0.0 ? Vec3(s.accum[i] / len) : Vec3(0, 0, 1);
    s.cam_normals[i] = camera.rotation * s.world_normals[i];
  }

  s.slot.assign(mesh.faces.size(), -1);
  s.bins.assign(static_cast<std::size_t>(s.tiles_x) * s.tiles_y, {});
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& t = mesh.faces[f];
    if (!s.valid[t[0]] || !s.valid[t[1]] || !s.valid[t[2]]) continue;
    const Vec2& p0 = s.screen[t[0]];
    const Vec2& p1 = s.screen[t[1]];
    const Vec2& p2 = s.screen[t[2]];
    // Pixel i is sampled at i + 0.5.
    const double lo_x = std::min({p0.x(), p1.x(), p2.x()}) - 0.5;
    const double hi_x = std::max({p0.x(), p1.x(), p2.x()}) - 0.5;
    const double lo_y = std::min({p0.y(), p1.y(), p2.y()}) - 0.5;
    const double hi_y = std::max({p0.y(), p1.y(), p2.y()}) - 0.5;
    if (hi_x < 0.0 || hi_y < 0.0 || lo_x > s.width - 1 || lo_y > s.height - 1) continue;
    const int x0 = std::max(0, static_cast<int>(std::ceil(lo_x)));
    const int x1 = std::min(s.width - 1, static_cast<int>(std::floor(hi_x)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(lo_y)));
    const int y1 = std::min(s.height - 1, static_cast<int>(std::floor(hi_y)));
    if (x0 > x1 || y0 > y1) continue;
    FaceSetup fs;
    for (int k = 0; k < 3; ++k) {
      fs.v[k] = t[k];
      fs.z[k] = s.cam[t[k]].z();
      fs.px[k] = s.screen[t[k]].x();
      fs.py[k] = s.screen[t[k]].y();
    }
    fs.area = area2(fs.px[0], fs.py[0], fs.px[1], fs.py[1], fs.px[2], fs.py[2]);
    fs.degenerate = std::abs(fs.area) < kDegenerateArea;
    fs.orient = fs.area < 0.0 ? -1.0 : 1.0;
    fs.x0 = x0;
    fs.x1 = x1;
    fs.y0 = y0;
    fs.y1 = y1;
    s.slot[f] = static_cast<int>(s.faces.size());
    s.faces.push_back(fs);
    for (int ty = y0 / kTile; ty <= y1 / kTile; ++ty) {
      for (int tx = x0 / kTile; tx <= x1 / kTile; ++tx) {
        s.bins[static_cast<std::size_t>(ty) * s.tiles_x + tx].push_back(static_cast<int>(f));
      }
    }
  }
  return s;
}

// Edge functions e_k = cross2(p[k+1] - p[k], q - p[k]).
inline void edge_functions(const FaceSetup& fs, double qx, double qy, double e[3]) {
  for (int k = 0; k < 3; ++k) {
    const int n = (k + 1) % 3;
    e[k] = area2(fs.px[k], fs.py[k], fs.px[n], fs.py[n], qx, qy);
  }
}

inline bool inside(const FaceSetup& fs, const double e[3]) {
  if (fs.degenerate) return false;
  return fs.orient * e[0] >= 0.0 && fs.orient * e[1] >= 0.0 && fs.orient * e[2] >= 0.0;
}

// Projected silhouette edge; the covered side is to the left of a -> b.
struct Contour {
  int va = 0;
  int vb = 0;
  double ax = 0, ay = 0, bx = 0, by = 0;
};

struct Contours {
  std::vector<Contour> segments;
  std::vector<std::vector<int>> bins;  // segment indices per tile, ascending
};

// Contour edges whose outer side is background in `face_id`.
Contours find_contours(const Setup& s, const TriMesh& mesh, const std::vector<MeshEdge>& edges,
                       const std::vector<int>& face_id) {
  Contours c;
  c.bins.assign(s.bins.size(), {});
  if (!s.soft) return c;
  auto projected = [&](int f) {
    if (f < 0) return false;
    const Face& t = mesh.faces[f];
    return s.valid[t[0]] && s.valid[t[1]] && s.valid[t[2]];
  };
  auto third = [&](int f, int a, int b) {
    for (int v : mesh.faces[f]) {
      if (v != a && v != b) return v;
    }
    return -1;
  };
  for (const MeshEdge& e : edges) {
    int f0 = e.f0;
    int f1 = e.f1;
    if (!projected(f0)) std::swap(f0, f1);
    if (!projected(f0)) continue;
    if (!projected(f1)) f1 = -1;
    const int c0 = third(f0, e.a, e.b);
    if (c0 < 0) continue;
    const Vec2& pa = s.screen[e.a];
    const Vec2& pb = s.screen[e.b];
    const double ax = pa.x(), ay = pa.y(), bx = pb.x(), by = pb.y();
    const double side0 = area2(ax, ay, bx, by, s.screen[c0].x(), s.screen[c0].y());
    if (side0 == 0.0) continue;
    if (f1 >= 0) {
      const int c1 = third(f1, e.a, e.b);
      if (c1 < 0) continue;
      const double side1 = area2(ax, ay, bx, by, s.screen[c1].x(), s.screen[c1].y());
      if (side1 == 0.0 || (side0 > 0.0) != (side1 > 0.0)) continue;
    }
    Contour seg;
    if (side0 > 0.0) {
      seg = {e.a, e.b, ax, ay, bx, by};
    } else {
      seg = {e.b, e.a, bx, by, ax, ay};
    }
    const double len = std::hypot(seg.bx - seg.ax, seg.by - seg.ay);
    if (len > 0.0) {
      // Outward normal is to the right of a -> b.
      const double ox = 0.5 * (seg.ax + seg.bx) + 0.75 * (seg.by - seg.ay) / len;
      const double oy = 0.5 * (seg.ay + seg.by) - 0.75 * (seg.bx - seg.ax) / len;
      const int px = static_cast<int>(std::floor(ox));
      const int py = static_cast<int>(std::floor(oy));
      if (px >= 0 && py >= 0 && px < s.width && py < s.height &&
          face_id[static_cast<std::size_t>(py) * s.width + px] >= 0) {
        continue;
      }
    }
    const double lo_x = std::min(seg.ax, seg.bx) - s.cut - 0.5;
    const double hi_x = std::max(seg.ax, seg.bx) + s.cut - 0.5;
    const double lo_y = std::min(seg.ay, seg.by) - s.cut - 0.5;
    const double hi_y = std::max(seg.ay, seg.by) + s.cut - 0.5;
    if (hi_x < 0.0 || hi_y < 0.0 || lo_x > s.width - 1 || lo_y > s.height - 1) continue;
    const int x0 = std::max(0, static_cast<int>(std::ceil(lo_x)));
    const int x1 = std::min(s.width - 1, static_cast<int>(std::floor(hi_x)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(lo_y)));
    const int y1 = std::min(s.height - 1, static_cast<int>(std::floor(hi_y)));
    if (x0 > x1 || y0 > y1) continue;
    const int id = static_cast<int>(c.segments.size());
    c.segments.push_back(seg);
    for (int ty = y0 / kTile; ty <= y1 / kTile; ++ty) {
      for (int tx = x0 / kTile; tx <= x1 / kTile; ++tx) {
        c.bins[static_cast<std::size_t>(ty) * s.tiles_x + tx].push_back(id);
      }
    }
  }
  return c;
}

struct Nearest {
  int slot = -1;  // position in the tile bin
  double dist = kInf;
  double t = 0.0;
  double ux = 0.0, uy = 0.0;  // unit vector from the closest point to q
};

Nearest nearest_contour(const Contours& c, const std::vector<int>& bin, double qx, double qy) {
  Nearest n;
  for (std::size_t i = 0; i < bin.size(); ++i) {
    const Contour& seg = c.segments[bin[i]];
    const double ex = seg.bx - seg.ax;
    const double ey = seg.by - seg.ay;
    const double len2 = ex * ex + ey * ey;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((qx - seg.ax) * ex + (qy - seg.ay) * ey) / len2, 0.0, 1.0);
    const double dx = qx - (seg.ax + t * ex);
    const double dy = qy - (seg.ay + t * ey);
    const double dist = std::sqrt(dx * dx + dy * dy);
    if (dist < n.dist) {
      n.slot = static_cast<int>(i);
      n.dist = dist;
      n.t = t;
      n.ux = dist > 0.0 ? dx / dist : 0.0;
      n.uy = dist > 0.0 ? dy / dist : 0.0;
    }
  }
  return n;
}

void check_upstream(const UpstreamGradients& up, int width, int height) {
  auto check = [&](bool empty, int w, int h, const char* what) {
    if (!empty && (w != width || h != height)) {
      throw DimensionError(fmt::format("{} gradient is {}x{}, render is {}x{}", what, w, h, width, height));
    }
  };
  check(up.mask.empty(), up.mask.width(), up.mask.height(), "mask");
  check(up.normal.empty(), up.normal.width(), up.normal.height(), "normal");
  check(up.color.empty(), up.color.width(), up.color.height(), "color");
}

struct FaceGrad {
  double dp[6] = {0, 0, 0, 0, 0, 0};  // screen positions
  double dz[3] = {0, 0, 0};           // camera-space depth of each vertex
  Vec3 dn[3] = {Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};  // camera-space vertex normals

  FaceGrad& operator+=(const FaceGrad& o) {
    for (int i = 0; i < 6; ++i) dp[i] += o.dp[i];
    for (int i = 0; i < 3; ++i) {
      dz[i] += o.dz[i];
      dn[i] += o.dn[i];
    }
    return *this;
  }
};

}  // namespace

void RasterConfig::validate() const {
  if (mode == RasterMode::soft && !(sigma > 0.0)) {
    throw InvariantError(fmt::format("raster sigma must be positive in soft mode (got {})", sigma));
  }
  if (!(near_plane > 0.0)) throw InvariantError("raster near plane must be positive");
  if (mode == RasterMode::soft && !(support_sigmas > 0.0)) {
    throw InvariantError("raster support_sigmas must be positive");
  }
}

RenderOutput render(const TriMesh& mesh, const Camera& camera, const RasterConfig& config) {
  if (config.mode == RasterMode::hard) return render(mesh, camera, config, {});
  return render(mesh, camera, config, mesh_edges(mesh));
}

RenderOutput render(const TriMesh& mesh, const Camera& camera, const RasterConfig& config,
                    const std::vector<MeshEdge>& edges) {
  config.validate();
  const Setup s = make_setup(mesh, camera, config);
  const int w = s.width;
  const int h = s.height;
  const std::size_t np = static_cast<std::size_t>(w) * h;

  RenderOutput out;
  out.width = w;
  out.height = h;
  out.mask = MaskImage(w, h);
  out.normal = NormalImage(w, h);
  out.color = RgbImage(w, h);
  out.depth.assign(np, kInf);
  out.face_id.assign(np, -1);
  out.weights.assign(np, {0.0, 0.0, 0.0});
  const bool colored = mesh.has_colors();

  parallel_for_each_index(s.bins.size(), [&](std::size_t tile) {
    const int tx0 = static_cast<int>(tile % s.tiles_x) * kTile;
    const int ty0 = static_cast<int>(tile / s.tiles_x) * kTile;
    const int tx1 = std::min(tx0 + kTile, w) - 1;
    const int ty1 = std::min(ty0 + kTile, h) - 1;
    double zbuf[kTile * kTile];
    int fid[kTile * kTile];
    double bary[kTile * kTile][3];
    std::fill(std::begin(zbuf), std::end(zbuf), kInf);
    std::fill(std::begin(fid), std::end(fid), -1);

    for (int f : s.bins[tile]) {
      const FaceSetup& fs = s.face(f);
      if (fs.degenerate) continue;
      const int x0 = std::max(fs.x0, tx0), x1 = std::min(fs.x1, tx1);
      const int y0 = std::max(fs.y0, ty0), y1 = std::min(fs.y1, ty1);
      for (int y = y0; y <= y1; ++y) {
        const double qy = y + 0.5;
        for (int x = x0; x <= x1; ++x) {
          const double qx = x + 0.5;
          const int li = (y - ty0) * kTile + (x - tx0);
          double e[3];
          edge_functions(fs, qx, qy, e);
          if (!inside(fs, e)) continue;
          const double b0 = e[1] / fs.area;
          const double b1 = e[2] / fs.area;
          const double b2 = e[0] / fs.area;
          const double inv_z = b0 / fs.z[0] + b1 / fs.z[1] + b2 / fs.z[2];
          const double depth = 1.0 / inv_z;
          if (depth < zbuf[li]) {
            zbuf[li] = depth;
            fid[li] = f;
            bary[li][0] = b0;
            bary[li][1] = b1;
            bary[li][2] = b2;
          }
        }
      }
    }

    for (int y = ty0; y <= ty1; ++y) {
      for (int x = tx0; x <= tx1; ++x) {
        const int li = (y - ty0) * kTile + (x - tx0);
        const std::size_t p = static_cast<std::size_t>(y) * w + x;
        const int f = fid[li];
        out.mask[p] = f >= 0 ? 1.0 : 0.0;
        if (f < 0) continue;
        const FaceSetup& fs = s.face(f);
        double q[3];
        double sum = 0.0;
        for (int k = 0; k < 3; ++k) {
          q[k] = bary[li][k] / fs.z[k];
          sum += q[k];
        }
        std::array<double, 3> wgt{q[0] / sum, q[1] / sum, q[2] / sum};
        out.face_id[p] = f;
        out.depth[p] = zbuf[li];
        out.weights[p] = wgt;
        Vec3 n = Vec3::Zero();
        for (int k = 0; k < 3; ++k) n += wgt[k] * s.cam_normals[fs.v[k]];
        const double len = n.norm();
        if (len > 0.0) out.normal.set_pixel(p, n / len);
        if (colored) {
          Vec3 c = Vec3::Zero();
          for (int k = 0; k < 3; ++k) c += wgt[k] * mesh.colors[fs.v[k]];
          out.color.set_pixel(p, c);
        }
      }
    }
  });

  if (!s.soft) return out;
  const Contours contours = find_contours(s, mesh, edges, out.face_id);
  parallel_for_each_index(s.bins.size(), [&](std::size_t tile) {
    const std::vector<int>& bin = contours.bins[tile];
    if (bin.empty()) return;
    const int tx0 = static_cast<int>(tile % s.tiles_x) * kTile;
    const int ty0 = static_cast<int>(tile / s.tiles_x) * kTile;
    const int tx1 = std::min(tx0 + kTile, w) - 1;
    const int ty1 = std::min(ty0 + kTile, h) - 1;
    for (int y = ty0; y <= ty1; ++y) {
      for (int x = tx0; x <= tx1; ++x) {
        const Nearest n = nearest_contour(contours, bin, x + 0.5, y + 0.5);
        if (!(n.dist < s.cut)) continue;
        const std::size_t p = static_cast<std::size_t>(y) * w + x;
        const double d = out.face_id[p] >= 0 ? n.dist : -n.dist;
        out.mask[p] = std::clamp((sigmoid(d / s.sigma) - s.s_lo) / s.s_span, 0.0, 1.0);
      }
    }
  });
  return out;
}

RenderGradients render_backward(const TriMesh& mesh, const Camera& camera,
                                const RasterConfig& config, const UpstreamGradients& upstream) {
  const RenderOutput forward = render(mesh, camera, config);
  return render_backward(mesh, camera, config, forward, upstream);
}

RenderGradients render_backward(const TriMesh& mesh, const Camera& camera,
                                const RasterConfig& config, const RenderOutput& forward,
                                const UpstreamGradients& upstream) {
  const bool need_edges = config.mode == RasterMode::soft && !upstream.mask.empty();
  return render_backward(mesh, camera, config, need_edges ? mesh_edges(mesh) : std::vector<MeshEdge>{},
                         forward, upstream);
}

RenderGradients render_backward(const TriMesh& mesh, const Camera& camera,
                                const RasterConfig& config, const std::vector<MeshEdge>& edges,
                                const RenderOutput& forward, const UpstreamGradients& upstream) {
  config.validate();
  check_upstream(upstream, camera.width, camera.height);
  if (forward.width != camera.width || forward.height != camera.height) {
    throw DimensionError("forward buffers do not match the camera size");
  }
  const Setup s = make_setup(mesh, camera, config);
  const int w = s.width;
  const int h = s.height;
  const bool use_mask = s.soft && !upstream.mask.empty();
  const bool use_normal = !upstream.normal.empty();
  const bool use_color = !upstream.color.empty();
  const bool colored = mesh.has_colors();

  const std::size_t ntiles = s.bins.size();
  std::vector<std::vector<FaceGrad>> tile_grads(ntiles);
  std::vector<std::vector<std::array<double, 4>>> contour_grads(ntiles);
  const Contours contours = use_mask ? find_contours(s, mesh, edges, forward.face_id) : Contours{};

  parallel_for_each_index(ntiles, [&](std::size_t tile) {
    const std::vector<int>& bin = s.bins[tile];
    std::vector<FaceGrad>& slots = tile_grads[tile];
    slots.assign(bin.size(), FaceGrad{});
    const int tx0 = static_cast<int>(tile % s.tiles_x) * kTile;
    const int ty0 = static_cast<int>(tile / s.tiles_x) * kTile;
    const int tx1 = std::min(tx0 + kTile, w) - 1;
    const int ty1 = std::min(ty0 + kTile, h) - 1;

    if (use_mask) {
      const std::vector<int>& cbin = contours.bins[tile];
      std::vector<std::array<double, 4>>& cslots = contour_grads[tile];
      cslots.assign(cbin.size(), {0.0, 0.0, 0.0, 0.0});
      for (int y = ty0; y <= ty1 && !cbin.empty(); ++y) {
        for (int x = tx0; x <= tx1; ++x) {
          const std::size_t p = static_cast<std::size_t>(y) * w + x;
          const double gm = upstream.mask[p];
          if (gm == 0.0) continue;
          const Nearest n = nearest_contour(contours, cbin, x + 0.5, y + 0.5);
          if (!(n.dist < s.cut)) continue;
          const double sign = forward.face_id[p] >= 0 ? 1.0 : -1.0;
          const double sg = sigmoid(sign * n.dist / s.sigma);
          // Blends clamped to exactly 0 or 1 carry no gradient.
          const double m = (sg - s.s_lo) / s.s_span;
          if (m <= 0.0 || m >= 1.0) continue;
          // D = sign * |q - c|, c = a + t (b - a); dD/dc = -sign * u.
          const double coef = -gm * sg * (1.0 - sg) / (s.sigma * s.s_span) * sign;
          auto& g = cslots[static_cast<std::size_t>(n.slot)];
          g[0] += coef * (1.0 - n.t) * n.ux;
          g[1] += coef * (1.0 - n.t) * n.uy;
          g[2] += coef * n.t * n.ux;
          g[3] += coef * n.t * n.uy;
        }
      }
    }

    if (use_normal || use_color) {
      for (int y = ty0; y <= ty1; ++y) {
        for (int x = tx0; x <= tx1; ++x) {
          const std::size_t p = static_cast<std::size_t>(y) * w + x;
          const int f = forward.face_id[p];
          if (f < 0) continue;
          const Vec3 gn = use_normal ? upstream.normal.pixel(p) : Vec3::Zero();
          const Vec3 gc = use_color ? upstream.color.pixel(p) : Vec3::Zero();
          if (gn.isZero(0.0) && gc.isZero(0.0)) continue;
          const auto it = std::lower_bound(bin.begin(), bin.end(), f);
          FaceGrad& g = slots[static_cast<std::size_t>(it - bin.begin())];
          const FaceSetup& fs = s.face(f);
          const auto& wgt = forward.weights[p];

          double dw[3] = {0, 0, 0};
          if (!gn.isZero(0.0)) {
            Vec3 u = Vec3::Zero();
            for (int k = 0; k < 3; ++k) u += wgt[k] * s.cam_normals[fs.v[k]];
            const double len = u.norm();
            if (len > 0.0) {
              const Vec3 n = u / len;
              const Vec3 du = (gn - n * n.dot(gn)) / len;
              for (int k = 0; k < 3; ++k) {
                g.dn[k] += wgt[k] * du;
                dw[k] += s.cam_normals[fs.v[k]].dot(du);
              }
            }
          }
          if (colored && !gc.isZero(0.0)) {
            for (int k = 0; k < 3; ++k) dw[k] += mesh.colors[fs.v[k]].dot(gc);
          }

          // w_k = (b_k / z_k) / sum_j (b_j / z_j), b_k = E_k / A.
          const double qx = x + 0.5;
          const double qy = y + 0.5;
          double e[3];
          edge_functions(fs, qx, qy, e);
          const double b[3] = {e[1] / fs.area, e[2] / fs.area, e[0] / fs.area};
          double qk[3];
          double qsum = 0.0;
          for (int k = 0; k < 3; ++k) {
            qk[k] = b[k] / fs.z[k];
            qsum += qk[k];
          }
          double wdot = 0.0;
          for (int k = 0; k < 3; ++k) wdot += wgt[k] * dw[k];
          double db[3];
          for (int k = 0; k < 3; ++k) {
            const double dq = (dw[k] - wdot) / qsum;
            db[k] = dq / fs.z[k];
            g.dz[k] -= dq * b[k] / (fs.z[k] * fs.z[k]);
          }
          double dA = 0.0;
          for (int k = 0; k < 3; ++k) {
            // E_k = cross2(p[k+1] - ... ) = area2(p[k+1], p[k+2], q).
            const double dE = db[k] / fs.area;
            dA -= db[k] * b[k] / fs.area;
            const int a = (k + 1) % 3;
            const int c = (k + 2) % 3;
            g.dp[2 * a] += dE * (fs.py[c] - qy);
            g.dp[2 * a + 1] += dE * (qx - fs.px[c]);
            g.dp[2 * c] += dE * (qy - fs.py[a]);
            g.dp[2 * c + 1] += dE * (fs.px[a] - qx);
          }
          // A = area2(p0, p1, p2).
          g.dp[0] += dA * (fs.py[1] - fs.py[2]);
          g.dp[1] += dA * (fs.px[2] - fs.px[1]);
          g.dp[2] += dA * (fs.py[2] - fs.py[0]);
          g.dp[3] += dA * (fs.px[0] - fs.px[2]);
          g.dp[4] += dA * (fs.py[0] - fs.py[1]);
          g.dp[5] += dA * (fs.px[1] - fs.px[0]);
        }
      }
    }
  });

  // Fixed-order reduction: tiles, then faces, then vertices.
  std::vector<FaceGrad> face_grads(s.faces.size());
  for (std::size_t tile = 0; tile < ntiles; ++tile) {
    const auto& slots = tile_grads[tile];
    for (std::size_t slot = 0; slot < slots.size(); ++slot) {
      face_grads[static_cast<std::size_t>(s.slot[s.bins[tile][slot]])] += slots[slot];
    }
  }

  const std::size_t nv = mesh.vertices.size();
  std::vector<Vec2> d_screen(nv, Vec2::Zero());
  std::vector<Vec2> d_contour(contours.segments.size(), Vec2::Zero());
  std::vector<Vec2> d_contour_b(contours.segments.size(), Vec2::Zero());
  for (std::size_t tile = 0; tile < ntiles && use_mask; ++tile) {
    const auto& cslots = contour_grads[tile];
    for (std::size_t slot = 0; slot < cslots.size(); ++slot) {
      const int c = contours.bins[tile][slot];
      d_contour[c] += Vec2(cslots[slot][0], cslots[slot][1]);
      d_contour_b[c] += Vec2(cslots[slot][2], cslots[slot][3]);
    }
  }
  for (std::size_t c = 0; c < contours.segments.size(); ++c) {
    d_screen[contours.segments[c].va] += d_contour[c];
    d_screen[contours.segments[c].vb] += d_contour_b[c];
  }
  std::vector<double> d_depth(nv, 0.0);
  std::vector<Vec3> d_cam_normal(nv, Vec3::Zero());
  RenderGradients out;
  out.vertices.assign(nv, Vec3::Zero());
  out.colors = use_color && colored ? color_gradient(mesh, forward, upstream.color)
                                    : std::vector<Vec3>(nv, Vec3::Zero());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (s.slot[f] < 0) continue;
    const FaceGrad& g = face_grads[static_cast<std::size_t>(s.slot[f])];
    for (int k = 0; k < 3; ++k) {
      const int v = s.face(static_cast<int>(f)).v[k];
      d_screen[v] += Vec2(g.dp[2 * k], g.dp[2 * k + 1]);
      d_depth[v] += g.dz[k];
      d_cam_normal[v] += g.dn[k];
    }
  }

  // Projection: x = fx X/Z + cx, y = fy Y/Z + cy, depth = Z.
  const Mat3 rt = camera.rotation.transpose();
  for (std::size_t v = 0; v < nv; ++v) {
    if (!s.valid[v]) continue;
    const Vec3& c = s.cam[v];
    const double iz = 1.0 / c.z();
    const double gx = d_screen[v].x();
    const double gy = d_screen[v].y();
    const Vec3 dcam(gx * camera.fx * iz, gy * camera.fy * iz,
                    -gx * camera.fx * c.x() * iz * iz - gy * camera.fy * c.y() * iz * iz + d_depth[v]);
    out.vertices[v] += rt * dcam;
  }

  // Vertex normals: n_v = m_v / |m_v|, m_v = sum of incident (b - a) x (c - a).
  if (use_normal) {
    std::vector<Vec3> d_accum(nv, Vec3::Zero());
    for (std::size_t v = 0; v < nv; ++v) {
      const double len = s.accum[v].norm();
      if (len <= 0.0) continue;
      const Vec3 dn = rt * d_cam_normal[v];
      const Vec3& n = s.world_normals[v];
      d_accum[v] = (dn - n * n.dot(dn)) / len;
    }
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
      const Face& t = mesh.faces[f];
      const Vec3 ga = d_accum[t[0]] + d_accum[t[1]] + d_accum[t[2]];
      if (ga.isZero(0.0)) continue;
      const Vec3 e1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
      const Vec3 e2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
      const Vec3 g1 = e2.cross(ga);
      const Vec3 g2 = ga.cross(e1);
      out.vertices[t[1]] += g1;
      out.vertices[t[2]] += g2;
      out.vertices[t[0]] -= g1 + g2;
    }
  }
  return out;
}

std::vector<Vec3> color_gradient(const TriMesh& mesh, const RenderOutput& forward,
                                 const RgbImage& grad_color) {
  if (!grad_color.same_size(forward.width, forward.height)) {
    throw DimensionError("color gradient does not match the render size");
  }
  std::vector<Vec3> out(mesh.vertices.size(), Vec3::Zero());
  const std::size_t np = forward.pixel_count();
  for (std::size_t p = 0; p < np; ++p) {
    const int f = forward.face_id[p];
    if (f < 0) continue;
    const Vec3 g = grad_color.pixel(p);
    const Face& t = mesh.faces[f];
    for (int k = 0; k < 3; ++k) out[t[k]] += forward.weights[p][k] * g;
  }
  return out;
}

}  // namespace orbitcarve
