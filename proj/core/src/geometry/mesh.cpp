#include "orbitcarve/geometry/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <fmt/format.h>

#include "orbitcarve/common/error.hpp"
#include "orbitcarve/common/log.hpp"

namespace orbitcarve {
namespace {

std::uint64_t undirected_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (hi << 32) | lo;
}

std::vector<Vec3> accumulate_normals(const TriMesh& mesh, std::size_t* isolated) {
  std::vector<Vec3> n(mesh.vertices.size(), Vec3::Zero());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Vec3 a = face_area_vector(mesh, f);
    for (int v : mesh.faces[f]) n[v] += a;
  }
  std::size_t count = 0;
  for (Vec3& v : n) {
    const double len = v.norm();
    if (len > 0.0 && std::isfinite(len)) {
      v /= len;
    } else {
      v = Vec3(0, 0, 1);
      ++count;
    }
  }
  if (isolated) *isolated = count;
  return n;
}

}  // namespace

void TriMesh::validate() const {
  const auto nv = static_cast<long long>(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (!vertices[i].allFinite()) {
      throw InvariantError(fmt::format("vertex {} has a non-finite coordinate", i));
    }
  }
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const Face& t = faces[f];
    for (int v : t) {
      if (v < 0 || v >= nv) {
        throw IndexError(fmt::format("vertex index {} out of range (vertex count {})", v, nv),
                         static_cast<long long>(f));
      }
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw IndexError("face repeats a vertex", static_cast<long long>(f));
    }
  }
  if (has_colors()) {
    if (colors.size() != vertices.size()) {
      throw InvariantError(fmt::format("color count {} differs from vertex count {}",
                                       colors.size(), vertices.size()));
    }
    for (std::size_t i = 0; i < colors.size(); ++i) {
      const Vec3& c = colors[i];
      if (!c.allFinite() || c.minCoeff() < 0.0 || c.maxCoeff() > 1.0) {
        throw InvariantError(fmt::format("color of vertex {} outside [0, 1]", i));
      }
    }
  }
}

BoundingBox bounding_box(const std::vector<Vec3>& points) {
  BoundingBox box;
  if (points.empty()) return box;
  box.min = box.max = points.front();
  for (const Vec3& p : points) {
    box.min = box.min.cwiseMin(p);
    box.max = box.max.cwiseMax(p);
  }
  return box;
}

MeshStats mesh_stats(const TriMesh& mesh) {
  MeshStats s;
  s.vertex_count = mesh.vertices.size();
  s.face_count = mesh.faces.size();
  std::vector<std::uint64_t> edges;
  edges.reserve(mesh.faces.size() * 3);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& t = mesh.faces[f];
    for (int k = 0; k < 3; ++k) edges.push_back(undirected_key(t[k], t[(k + 1) % 3]));
    s.total_area += 0.5 * face_area_vector(mesh, f).norm();
  }
  std::sort(edges.begin(), edges.end());
  s.edge_count = static_cast<std::size_t>(std::unique(edges.begin(), edges.end()) - edges.begin());
  s.euler_characteristic = static_cast<long long>(s.vertex_count) -
                           static_cast<long long>(s.edge_count) +
                           static_cast<long long>(s.face_count);
  s.bbox = bounding_box(mesh.vertices);
  return s;
}

std::vector<Vec3> vertex_normals(const TriMesh& mesh) {
  std::size_t isolated = 0;
  auto n = accumulate_normals(mesh, &isolated);
  if (isolated > 0) {
    log::warn(fmt::format("vertex_normals: {} vertices without incident area; using (0, 0, 1)",
                          isolated));
  }
  return n;
}

std::vector<Vec3> vertex_normals_quiet(const TriMesh& mesh) {
  return accumulate_normals(mesh, nullptr);
}

EdgeTopology edge_topology(const TriMesh& mesh) {
  // Per undirected edge: number of uses and net direction count.
  struct Use {
    int count = 0;
    int forward = 0;
  };
  std::unordered_map<std::uint64_t, Use> uses;
  uses.reserve(mesh.faces.size() * 2);
  for (const Face& t : mesh.faces) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k];
      const int b = t[(k + 1) % 3];
      Use& u = uses[undirected_key(a, b)];
      ++u.count;
      u.forward += a < b ? 1 : -1;
    }
  }
  EdgeTopology topo;
  for (const auto& [key, u] : uses) {
    if (u.count == 1) {
      ++topo.boundary_edges;
    } else if (u.count > 2) {
      ++topo.nonmanifold_edges;
    } else if (u.forward != 0) {
      ++topo.inconsistent_edges;
    }
  }
  return topo;
}

std::vector<MeshEdge> mesh_edges(const TriMesh& mesh) {
  std::vector<std::pair<std::uint64_t, int>> uses;
  uses.reserve(mesh.faces.size() * 3);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& t = mesh.faces[f];
    for (int k = 0; k < 3; ++k) uses.emplace_back(undirected_key(t[k], t[(k + 1) % 3]), static_cast<int>(f));
  }
  std::sort(uses.begin(), uses.end());
  std::vector<MeshEdge> edges;
  edges.reserve(uses.size() / 2 + 1);
  for (std::size_t i = 0; i < uses.size();) {
    std::size_t j = i;
    while (j < uses.size() && uses[j].first == uses[i].first) ++j;
    const int a = static_cast<int>(uses[i].first & 0xffffffffu);
    const int b = static_cast<int>(uses[i].first >> 32);
    if (j - i == 2) {
      edges.push_back({a, b, uses[i].second, uses[i + 1].second});
    } else {
      for (std::size_t k = i; k < j; ++k) edges.push_back({a, b, uses[k].second, -1});
    }
    i = j;
  }
  return edges;
}

bool is_watertight(const TriMesh& mesh) {
  if (mesh.faces.empty()) return false;
  const EdgeTopology t = edge_topology(mesh);
  return t.boundary_edges == 0 && t.nonmanifold_edges == 0 && t.inconsistent_edges == 0;
}

double signed_volume(const TriMesh& mesh) {
  double v = 0.0;
  for (const Face& t : mesh.faces) {
    v += mesh.vertices[t[0]].dot(mesh.vertices[t[1]].cross(mesh.vertices[t[2]]));
  }
  return v / 6.0;
}

void transform_in_place(TriMesh& mesh, double scale, const Vec3& translation) {
  for (Vec3& p : mesh.vertices) p = scale * p + translation;
}

}  // namespace orbitcarve
