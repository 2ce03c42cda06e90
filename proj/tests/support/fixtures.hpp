#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "orbitcarve/carve/carve.hpp"
#include "orbitcarve/geometry/mesh.hpp"
#include "orbitcarve/init/orbit.hpp"

namespace orbitcarve::test {

// Empty scratch directory under ORBITCARVE_TEST_TMP (or the system temp dir).
std::filesystem::path scratch_dir(const std::string& name);

// Icosphere of radius 1 at the origin.
TriMesh unit_sphere(int subdivision);

// Latitude-longitude sphere: lon * (lat - 1) + 2 vertices, 2 * lon * (lat - 1) faces.
TriMesh uv_sphere(int lon, int lat, double radius);

// 200-face closed mesh: a 10 x 11 uv sphere of radius 0.8 with every vertex
// scaled by 1 + noise * U(-1, 1).
TriMesh random_closed_mesh(std::uint64_t seed, double noise = 0.1);

// Orbit used throughout the tests: radius 4, fov 50, elevation 20.
OrbitRig test_rig(int views, int size);

// Hard renders of `mesh` as optimization targets.
ViewTargets self_targets(const TriMesh& mesh, const std::vector<Camera>& cameras);

struct FdAgreement {
  int checked = 0;  // coordinates with |analytic| above the floor
  int agreeing = 0;
  double fraction() const { return checked ? static_cast<double>(agreeing) / checked : 0.0; }
};

// Central differences of `loss` over every vertex coordinate, compared with
// `analytic` by |fd - g| / max(|fd|, |g|) < tolerance.
template <typename Loss>
FdAgreement finite_difference_agreement(const TriMesh& mesh, const std::vector<Vec3>& analytic, Loss&& loss,
                                        double h, double tolerance, double floor = 1e-6) {
  FdAgreement out;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    for (int a = 0; a < 3; ++a) {
      const double g = analytic[v][a];
      if (!(std::abs(g) > floor)) continue;
      TriMesh plus = mesh;
      TriMesh minus = mesh;
      plus.vertices[v][a] += h;
      minus.vertices[v][a] -= h;
      const double fd = (loss(plus) - loss(minus)) / (2.0 * h);
      ++out.checked;
      if (std::abs(fd - g) < tolerance * std::max(std::abs(fd), std::abs(g))) ++out.agreeing;
    }
  }
  return out;
}

}  // namespace orbitcarve::test
