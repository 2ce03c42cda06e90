#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "orbitcarve/common/error.hpp"
#include "orbitcarve/common/random.hpp"
#include "orbitcarve/geometry/mesh.hpp"
#include "orbitcarve/init/poisson.hpp"
#include "orbitcarve/metrics/bvh.hpp"

using namespace orbitcarve;

namespace {

OrientedPointCloud sphere_cloud(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  OrientedPointCloud cloud;
  while (cloud.size() < n) {
    const double z = 2.0 * uniform01(rng) - 1.0;
    const double phi = 2.0 * std::numbers::pi * uniform01(rng);
    const double r = std::sqrt(1.0 - z * z);
    const Vec3 p(r * std::cos(phi), r * std::sin(phi), z);
    cloud.points.push_back(p);
    cloud.normals.push_back(p);
  }
  return cloud;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("10k sphere samples reconstruct the unit sphere") {
  const TriMesh m = poisson_mesh(sphere_cloud(10000, 1));
  double sum = 0.0;
  for (const Vec3& v : m.vertices) sum += std::abs(v.norm() - 1.0);
  CHECK(sum / m.vertices.size() < 0.02);
  CHECK(is_watertight(m));
  CHECK(mesh_stats(m).euler_characteristic == 2);
  CHECK(signed_volume(m) > 0.0);
}

TEST_CASE("indicator is negative inside and zero on average at the samples") {
  const OrientedPointCloud cloud = sphere_cloud(2000, 2);
  PoissonOptions opt;
  opt.resolution = 48;
  const ScalarGrid g = poisson_reconstruct(cloud, opt);
  CHECK(g.sample(Vec3::Zero()) < 0.0);
  double mean = 0.0;
  for (const Vec3& p : cloud.points) mean += g.sample(p);
  CHECK(std::abs(mean / cloud.size()) < 1e-9 * max_abs(g.values));
}

TEST_CASE("flipping the normals negates the indicator") {
  OrientedPointCloud cloud = sphere_cloud(2000, 3);
  PoissonOptions opt;
  opt.resolution = 48;
  const ScalarGrid a = poisson_reconstruct(cloud, opt);
  for (Vec3& n : cloud.normals) n = -n;
  const ScalarGrid b = poisson_reconstruct(cloud, opt);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) worst = std::max(worst, std::abs(a.values[i] + b.values[i]));
  CHECK(worst < 1e-5 * max_abs(a.values));
}

TEST_CASE("translating the cloud translates the surface") {
  const OrientedPointCloud cloud = sphere_cloud(3000, 4);
  const Vec3 delta(0.37, -0.21, 0.55);
  OrientedPointCloud moved = cloud;
  for (Vec3& p : moved.points) p += delta;
  PoissonOptions opt;
  opt.resolution = 64;
  const ScalarGrid grid = poisson_reconstruct(cloud, opt);
  const TriMesh a = poisson_mesh(cloud, opt);
  const TriMesh b = poisson_mesh(moved, opt);
  const TriangleBvh bvh(a);
  double worst = 0.0;
  for (const Vec3& v : b.vertices) worst = std::max(worst, std::sqrt(bvh.closest(v - delta).distance_sq));
  CHECK(worst < grid.spacing);
}

TEST_CASE("point order does not matter") {
  OrientedPointCloud cloud = sphere_cloud(2000, 5);
  PoissonOptions opt;
  opt.resolution = 40;
  const ScalarGrid a = poisson_reconstruct(cloud, opt);
  Rng rng(9);
  std::vector<std::size_t> perm(cloud.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  OrientedPointCloud shuffled;
  for (std::size_t i : perm) {
    shuffled.points.push_back(cloud.points[i]);
    shuffled.normals.push_back(cloud.normals[i]);
  }
  const ScalarGrid b = poisson_reconstruct(shuffled, opt);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
  CHECK(worst < 1e-5 * max_abs(a.values));
}

TEST_CASE("poisson errors") {
  CHECK_THROWS_AS(poisson_reconstruct(sphere_cloud(99, 6)), InvariantError);
  OrientedPointCloud bad = sphere_cloud(200, 6);
  bad.normals[3] *= 2.0;
  CHECK_THROWS_AS(poisson_reconstruct(bad), InvariantError);
  PoissonOptions opt;
  opt.resolution = 32;
  opt.max_iterations = 2;
  try {
    poisson_reconstruct(sphere_cloud(500, 7), opt);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.iterations() == 2);
    CHECK(e.residual() > 1e-6);
  }
}
