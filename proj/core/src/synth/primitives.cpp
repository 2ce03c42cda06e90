#include "orbitcarve/synth/primitives.hpp"

#include <cmath>
#include <algorithm>
#include <map>
#include <numbers>
#include <utility>

#include <fmt/format.h>

#include "orbitcarve/common/error.hpp"

namespace orbitcarve {
namespace {

constexpr double kPi = std::numbers::pi;

TriMesh icosphere(int levels) {
  const double t = std::numbers::phi;
  TriMesh m;
  m.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& v : m.vertices) v.normalize();
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
             {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int level = 0; level < levels; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const std::pair<int, int> key(std::min(a, b), std::max(a, b));
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int id = static_cast<int>(m.vertices.size());
      m.vertices.push_back((m.vertices[a] + m.vertices[b]).normalized());
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<Face> faces;
    faces.reserve(4 * m.faces.size());
    for (const Face& f : m.faces) {
      const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      faces.push_back({f[0], ab, ca});
      faces.push_back({f[1], bc, ab});
      faces.push_back({f[2], ca, bc});
      faces.push_back({ab, bc, ca});
    }
    m.faces = std::move(faces);
  }
  for (Vec3& v : m.vertices) v *= 0.5;
  m.colors.reserve(m.vertices.size());
  for (const Vec3& v : m.vertices) {
    m.colors.push_back(v.x() >= 0.0 ? Vec3(0.85, 0.25, 0.2) : Vec3(0.2, 0.35, 0.85));
  }
  return m;
}

TriMesh cube(int levels) {
  const int n = 1 << levels;
  TriMesh m;
  std::map<std::array<int, 3>, int> lattice;
  auto vertex = [&](std::array<int, 3> p) {
    auto it = lattice.find(p);
    if (it != lattice.end()) return it->second;
    const int id = static_cast<int>(m.vertices.size());
    const Vec3 x = Vec3(p[0], p[1], p[2]) / n - Vec3::Constant(0.5);
    m.vertices.push_back(x);
    m.colors.push_back(0.8 * (x + Vec3::Constant(0.5)) + Vec3::Constant(0.1));
    lattice.emplace(p, id);
    return id;
  };
  // (normal axis, side, u axis, v axis) with u x v along the outward normal.
  constexpr int kSides[6][4] = {{0, 1, 1, 2}, {0, 0, 2, 1}, {1, 1, 2, 0},
                                {1, 0, 0, 2}, {2, 1, 0, 1}, {2, 0, 1, 0}};
  for (const auto& side : kSides) {
    for (int b = 0; b < n; ++b) {
      for (int a = 0; a < n; ++a) {
        int q[4];
        const int du[4] = {0, 1, 1, 0};
        const int dv[4] = {0, 0, 1, 1};
        for (int c = 0; c < 4; ++c) {
          std::array<int, 3> p{};
          p[side[0]] = side[1] * n;
          p[side[2]] = a + du[c];
          p[side[3]] = b + dv[c];
          q[c] = vertex(p);
        }
        m.faces.push_back({q[0], q[1], q[2]});
        m.faces.push_back({q[0], q[2], q[3]});
      }
    }
  }
  return m;
}

// Rings are listed top to bottom, each with `around` vertices at angle
// theta = 2 pi k / around, position (rho sin theta, y, rho cos theta).
TriMesh capsule(int levels) {
  const int around = 8 << levels;
  const int cap = 2 << levels;
  const int cyl = 2 << levels;
  const double r = 0.25, c = 0.25;
  std::vector<std::pair<double, double>> rings;  // (y, rho)
  for (int i = 1; i <= cap; ++i) {
    const double a = 0.5 * kPi * i / cap;
    rings.emplace_back(c + r * std::cos(a), r * std::sin(a));
  }
  for (int j = 1; j < cyl; ++j) rings.emplace_back(c - 2.0 * c * j / cyl, r);
  for (int i = cap; i >= 1; --i) {
    const double a = 0.5 * kPi * i / cap;
    rings.emplace_back(-c - r * std::cos(a), r * std::sin(a));
  }
  TriMesh m;
  m.vertices.emplace_back(0, c + r, 0);
  for (const auto& [y, rho] : rings) {
    for (int k = 0; k < around; ++k) {
      const double th = 2.0 * kPi * k / around;
      m.vertices.emplace_back(rho * std::sin(th), y, rho * std::cos(th));
    }
  }
  const int bottom = static_cast<int>(m.vertices.size());
  m.vertices.emplace_back(0, -c - r, 0);
  auto ring = [&](int i, int k) { return 1 + i * around + (k % around); };
  for (int k = 0; k < around; ++k) m.faces.push_back({0, ring(0, k), ring(0, k + 1)});
  for (int i = 0; i + 1 < static_cast<int>(rings.size()); ++i) {
    for (int k = 0; k < around; ++k) {
      m.faces.push_back({ring(i, k), ring(i + 1, k), ring(i + 1, k + 1)});
      m.faces.push_back({ring(i, k), ring(i + 1, k + 1), ring(i, k + 1)});
    }
  }
  const int last = static_cast<int>(rings.size()) - 1;
  for (int k = 0; k < around; ++k) m.faces.push_back({ring(last, k), bottom, ring(last, k + 1)});
  for (const Vec3& v : m.vertices) {
    const double t = v.y() + 0.5;
    m.colors.push_back(t * Vec3(0.9, 0.7, 0.2) + (1.0 - t) * Vec3(0.2, 0.6, 0.3));
  }
  return m;
}

TriMesh torus(int levels) {
  const int major = 12 << levels;
  const int minor = 6 << levels;
  const double big = 0.35, small = 0.15;
  TriMesh m;
  for (int i = 0; i < major; ++i) {
    const double u = 2.0 * kPi * i / major;
    for (int j = 0; j < minor; ++j) {
      const double v = 2.0 * kPi * j / minor;
      const double rho = big + small * std::cos(v);
      m.vertices.emplace_back(rho * std::sin(u), small * std::sin(v), rho * std::cos(u));
      m.colors.emplace_back(0.5 + 0.4 * std::sin(u), 0.5 + 0.4 * std::cos(u), 0.6);
    }
  }
  auto id = [&](int i, int j) { return (i % major) * minor + (j % minor); };
  for (int i = 0; i < major; ++i) {
    for (int j = 0; j < minor; ++j) {
      m.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return m;
}

}  // namespace

PrimitiveKind parse_primitive_kind(const std::string& name) {
  if (name == "sphere") return PrimitiveKind::sphere;
  if (name == "cube") return PrimitiveKind::cube;
  if (name == "capsule") return PrimitiveKind::capsule;
  if (name == "torus") return PrimitiveKind::torus;
  throw InvariantError(fmt::format("unknown shape '{}' (expected sphere, cube, capsule or torus)", name));
}

std::string to_string(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::sphere: return "sphere";
    case PrimitiveKind::cube: return "cube";
    case PrimitiveKind::capsule: return "capsule";
    case PrimitiveKind::torus: return "torus";
  }
  return "?";
}

TriMesh make_primitive(PrimitiveKind kind, int subdivision) {
  if (subdivision < 0 || subdivision > kMaxSubdivision) {
    throw InvariantError(
        fmt::format("subdivision must be in [0, {}] (got {})", kMaxSubdivision, subdivision));
  }
  switch (kind) {
    case PrimitiveKind::sphere: return icosphere(subdivision);
    case PrimitiveKind::cube: return cube(subdivision);
    case PrimitiveKind::capsule: return capsule(subdivision);
    case PrimitiveKind::torus: return torus(subdivision);
  }
  return {};
}

}  // namespace orbitcarve
