#include "orbitcarve/carve/halfedge_mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

namespace orbitcarve {
namespace {

VertexSources merge_sources(const VertexSources& a, const VertexSources& b) {
  VertexSources out;
  out.reserve(a.size() + b.size());
  for (const auto& [v, w] : a) out.emplace_back(v, 0.5 * w);
  for (const auto& [v, w] : b) out.emplace_back(v, 0.5 * w);
  std::sort(out.begin(), out.end());
  VertexSources merged;
  for (const auto& s : out) {
    if (!merged.empty() && merged.back().first == s.first) {
      merged.back().second += s.second;
    } else {
      merged.push_back(s);
    }
  }
  return merged;
}

}  // namespace

HalfedgeMesh::HalfedgeMesh(const TriMesh& mesh)
    : pos_(mesh.vertices),
      faces_(mesh.faces),
      twin_(3 * mesh.faces.size(), kBoundary),
      out_(mesh.vertices.size(), -1),
      valence_(mesh.vertices.size(), 0),
      face_dead_(mesh.faces.size(), 0),
      vert_dead_(mesh.vertices.size(), 0),
      locked_(mesh.vertices.size(), 0),
      sources_(mesh.vertices.size()),
      colors_(mesh.colors) {
  for (std::size_t v = 0; v < pos_.size(); ++v) sources_[v] = {{static_cast<int>(v), 1.0}};

  std::unordered_map<std::uint64_t, std::vector<int>> edges;
  edges.reserve(3 * faces_.size());
  std::vector<std::uint64_t> order;
  for (int h = 0; h < halfedge_count(); ++h) {
    const int lo = std::min(from(h), to(h));
    const int hi = std::max(from(h), to(h));
    const std::uint64_t key = (static_cast<std::uint64_t>(lo) << 32) | static_cast<std::uint32_t>(hi);
    auto& list = edges[key];
    if (list.empty()) order.push_back(key);
    list.push_back(h);
    if (out_[from(h)] < 0) out_[from(h)] = h;
  }
  for (std::uint64_t key : order) {
    const auto& list = edges[key];
    const int lo = static_cast<int>(key >> 32);
    const int hi = static_cast<int>(key & 0xffffffffu);
    ++valence_[lo];
    ++valence_[hi];
    if (list.size() == 2 && from(list[0]) == to(list[1]) && to(list[0]) == from(list[1])) {
      twin_[list[0]] = list[1];
      twin_[list[1]] = list[0];
      continue;
    }
    const int mark = list.size() == 1 ? kBoundary : kLocked;
    for (int h : list) twin_[h] = mark;
    locked_[lo] = locked_[hi] = 1;
    ++locked_edges_;
  }
  for (int v = 0; v < vertex_count(); ++v) {
    if (out_[v] < 0) {
      locked_[v] = 1;
      continue;
    }
    // Several fans meeting at one vertex.
    if (!locked_[v] && static_cast<int>(outgoing(v).size()) != valence_[v]) locked_[v] = 1;
  }
}

std::vector<int> HalfedgeMesh::outgoing(int v) const {
  std::vector<int> out;
  if (locked_[v] || vert_dead_[v]) return out;
  const int start = out_[v];
  int h = start;
  const int limit = valence_[v] + 2;
  do {
    out.push_back(h);
    const int t = twin_[prev(h)];
    if (t < 0 || static_cast<int>(out.size()) > limit) return {};
    h = t;
  } while (h != start);
  return out;
}

std::vector<int> HalfedgeMesh::neighbors(int v) const {
  std::vector<int> out;
  for (int h : outgoing(v)) out.push_back(to(h));
  return out;
}

int HalfedgeMesh::find_halfedge(int f, int a, int b) const {
  for (int k = 0; k < 3; ++k) {
    if (faces_[f][k] == a && faces_[f][(k + 1) % 3] == b) return 3 * f + k;
  }
  return -1;
}

void HalfedgeMesh::set_face(int f, int a, int b, int c) { faces_[f] = {a, b, c}; }

int HalfedgeMesh::add_face(int a, int b, int c) {
  faces_.push_back({a, b, c});
  face_dead_.push_back(0);
  twin_.insert(twin_.end(), 3, kBoundary);
  return face_count() - 1;
}

void HalfedgeMesh::link(int h, int outer) {
  twin_[h] = outer;
  if (outer >= 0) twin_[outer] = h;
}

void HalfedgeMesh::refresh_vertex_handles(int f) {
  for (int k = 0; k < 3; ++k) out_[faces_[f][k]] = 3 * f + k;
}

Vec3 HalfedgeMesh::face_normal(int a, int b, int c) const {
  return (pos_[b] - pos_[a]).cross(pos_[c] - pos_[a]);
}

bool HalfedgeMesh::split(int h) {
  const int t = twin_[h];
  if (t < 0) return false;
  const int a = from(h), b = to(h), c = to(next(h)), d = to(next(t));
  const int f0 = h / 3, f1 = t / 3;
  const int e_bc = twin_[next(h)], e_ca = twin_[prev(h)];
  const int e_ad = twin_[next(t)], e_db = twin_[prev(t)];

  const int m = vertex_count();
  pos_.push_back(0.5 * (pos_[a] + pos_[b]));
  out_.push_back(-1);
  valence_.push_back(4);
  vert_dead_.push_back(0);
  locked_.push_back(0);
  sources_.push_back(merge_sources(sources_[a], sources_[b]));
  if (!colors_.empty()) colors_.push_back(0.5 * (colors_[a] + colors_[b]));

  set_face(f0, a, m, c);
  const int f2 = add_face(m, b, c);
  set_face(f1, m, a, d);
  const int f3 = add_face(b, m, d);
  link(find_halfedge(f0, a, m), find_halfedge(f1, m, a));
  link(find_halfedge(f0, m, c), find_halfedge(f2, c, m));
  link(find_halfedge(f2, m, b), find_halfedge(f3, b, m));
  link(find_halfedge(f1, d, m), find_halfedge(f3, m, d));
  link(find_halfedge(f0, c, a), e_ca);
  link(find_halfedge(f2, b, c), e_bc);
  link(find_halfedge(f1, a, d), e_ad);
  link(find_halfedge(f3, d, b), e_db);
  ++valence_[c];
  ++valence_[d];
  for (int f : {f0, f1, f2, f3}) refresh_vertex_handles(f);
  return true;
}

bool HalfedgeMesh::collapse(int h, double max_edge, double min_area) {
  const int t = twin_[h];
  if (t < 0) return false;
  const int a = from(h), b = to(h), c = to(next(h)), d = to(next(t));
  if (locked_[a] || locked_[b] || c == d) return false;
  if (valence_[c] <= 3 || valence_[d] <= 3) return false;
  const std::vector<int> out_a = outgoing(a);
  const std::vector<int> out_b = outgoing(b);
  if (out_a.empty() || out_b.empty()) return false;

  std::vector<int> ring_a, ring_b;
  for (int e : out_a) ring_a.push_back(to(e));
  for (int e : out_b) ring_b.push_back(to(e));
  int common = 0;
  for (int w : ring_a) {
    if (std::find(ring_b.begin(), ring_b.end(), w) != ring_b.end()) {
      if (w != c && w != d) return false;
      ++common;
    }
  }
  if (common != 2) return false;

  const Vec3 p = 0.5 * (pos_[a] + pos_[b]);
  for (const auto* ring : {&ring_a, &ring_b}) {
    for (int w : *ring) {
      if (w != a && w != b && (pos_[w] - p).norm() > max_edge) return false;
    }
  }
  const int f0 = h / 3, f1 = t / 3;
  for (const auto* outs : {&out_a, &out_b}) {
    for (int e : *outs) {
      const int f = e / 3;
      if (f == f0 || f == f1) continue;
      const Face& tri = faces_[f];
      const Vec3 before = face_normal(tri[0], tri[1], tri[2]);
      Vec3 q[3];
      for (int k = 0; k < 3; ++k) q[k] = (tri[k] == a || tri[k] == b) ? p : pos_[tri[k]];
      const Vec3 after = (q[1] - q[0]).cross(q[2] - q[0]);
      if (0.5 * after.norm() < min_area || before.dot(after) <= 0.0) return false;
    }
  }

  const int x = twin_[next(h)], y = twin_[prev(h)];
  const int u = twin_[next(t)], w = twin_[prev(t)];
  for (int e : out_b) {
    const int f = e / 3;
    if (f == f0 || f == f1) continue;
    for (int k = 0; k < 3; ++k) {
      if (faces_[f][k] == b) faces_[f][k] = a;
    }
  }
  link(x, y);
  link(u, w);
  face_dead_[f0] = face_dead_[f1] = 1;
  vert_dead_[b] = 1;
  pos_[a] = p;
  sources_[a] = merge_sources(sources_[a], sources_[b]);
  if (!colors_.empty()) colors_[a] = 0.5 * (colors_[a] + colors_[b]);
  valence_[a] += valence_[b] - 4;
  --valence_[c];
  --valence_[d];
  for (const auto* outs : {&out_a, &out_b}) {
    for (int e : *outs) {
      if (!face_dead_[e / 3]) refresh_vertex_handles(e / 3);
    }
  }
  return true;
}

bool HalfedgeMesh::flip(int h, double min_area) {
  const int t = twin_[h];
  if (t < 0) return false;
  const int a = from(h), b = to(h), c = to(next(h)), d = to(next(t));
  if (locked_[a] || locked_[b] || locked_[c] || locked_[d] || c == d) return false;
  if (valence_[a] <= 3 || valence_[b] <= 3) return false;
  const std::vector<int> ring_c = neighbors(c);
  if (ring_c.empty() || std::find(ring_c.begin(), ring_c.end(), d) != ring_c.end()) return false;

  const Vec3 ref = face_normal(a, b, c).normalized() + face_normal(b, a, d).normalized();
  const Vec3 m0 = face_normal(c, a, d);
  const Vec3 m1 = face_normal(d, b, c);
  if (0.5 * m0.norm() < min_area || 0.5 * m1.norm() < min_area) return false;
  if (m0.dot(ref) <= 0.0 || m1.dot(ref) <= 0.0 || m0.dot(m1) <= 0.0) return false;

  const int e_bc = twin_[next(h)], e_ca = twin_[prev(h)];
  const int e_ad = twin_[next(t)], e_db = twin_[prev(t)];
  const int f0 = h / 3, f1 = t / 3;
  set_face(f0, c, a, d);
  set_face(f1, d, b, c);
  link(find_halfedge(f0, d, c), find_halfedge(f1, c, d));
  link(find_halfedge(f0, c, a), e_ca);
  link(find_halfedge(f0, a, d), e_ad);
  link(find_halfedge(f1, d, b), e_db);
  link(find_halfedge(f1, b, c), e_bc);
  --valence_[a];
  --valence_[b];
  ++valence_[c];
  ++valence_[d];
  refresh_vertex_handles(f0);
  refresh_vertex_handles(f1);
  return true;
}

Vec3 HalfedgeMesh::vertex_normal(int v) const {
  Vec3 n = Vec3::Zero();
  for (int h : outgoing(v)) {
    const Face& f = faces_[h / 3];
    n += face_normal(f[0], f[1], f[2]);
  }
  const double len = n.norm();
  return len > 0.0 ? Vec3(n / len) : Vec3::Zero();
}

TriMesh HalfedgeMesh::to_mesh(std::vector<VertexSources>* sources) const {
  TriMesh mesh;
  std::vector<int> remap(pos_.size(), -1);
  for (int v = 0; v < vertex_count(); ++v) {
    if (vert_dead_[v]) continue;
    remap[v] = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(pos_[v]);
    if (!colors_.empty()) mesh.colors.push_back(colors_[v]);
    if (sources) sources->push_back(sources_[v]);
  }
  for (int f = 0; f < face_count(); ++f) {
    if (face_dead_[f]) continue;
    const Face& t = faces_[f];
    mesh.faces.push_back({remap[t[0]], remap[t[1]], remap[t[2]]});
  }
  return mesh;
}

}  // namespace orbitcarve
