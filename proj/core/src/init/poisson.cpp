#include "orbitcarve/init/poisson.hpp"

#include <cmath>

#include <fmt/format.h>

#include "orbitcarve/common/error.hpp"
#include "orbitcarve/common/log.hpp"
#include "orbitcarve/common/parallel.hpp"
#include "orbitcarve/init/marching_cubes.hpp"

namespace orbitcarve {
namespace {

// Adds w * value to the staggered component `axis`, whose samples sit half a
// cell along that axis from the nodes.
void splat(std::vector<double>& field, const ScalarGrid& grid, int axis, const Vec3& p, double value) {
  const int n = grid.resolution;
  Vec3 u = (p - grid.origin) / grid.spacing;
  u[axis] -= 0.5;
  int i0[3];
  double t[3];
  for (int a = 0; a < 3; ++a) {
    i0[a] = static_cast<int>(std::floor(u[a]));
    t[a] = u[a] - i0[a];
  }
  for (int c = 0; c < 8; ++c) {
    int idx[3];
    double w = 1.0;
    bool inside = true;
    for (int a = 0; a < 3; ++a) {
      const int d = (c >> a) & 1;
      idx[a] = i0[a] + d;
      w *= d ? t[a] : 1.0 - t[a];
      const int hi = a == axis ? n - 2 : n - 1;
      inside = inside && idx[a] >= 0 && idx[a] <= hi;
    }
    if (inside) field[grid.index(idx[0], idx[1], idx[2])] += w * value;
  }
}

// y = A x with A = -h^2 * Laplacian on interior nodes; boundary rows are zero.
void apply_laplacian(const std::vector<double>& x, std::vector<double>& y, int n) {
  const std::size_t sx = 1, sy = n, sz = static_cast<std::size_t>(n) * n;
  parallel_for(static_cast<std::size_t>(n), 4, [&](std::size_t kb, std::size_t ke) {
    for (std::size_t k = kb; k < ke; ++k) {
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          const std::size_t id = k * sz + j * sy + i;
          if (i == 0 || j == 0 || k == 0 || i == n - 1 || j == n - 1 || static_cast<int>(k) == n - 1) {
            y[id] = 0.0;
            continue;
          }
          y[id] = 6.0 * x[id] - x[id - sx] - x[id + sx] - x[id - sy] - x[id + sy] - x[id - sz] - x[id + sz];
        }
      }
    }
  });
}

}  // namespace

ScalarGrid poisson_reconstruct(const OrientedPointCloud& cloud, const PoissonOptions& options) {
  cloud.validate();
  if (cloud.size() < kMinPoissonPoints) {
    throw InvariantError(fmt::format("Poisson reconstruction needs at least {} points (got {})",
                                     kMinPoissonPoints, cloud.size()));
  }
  const int n = options.resolution;
  if (n < 4) throw InvariantError(fmt::format("Poisson resolution must be ≥ 4 (got {})", n));

  const BoundingBox box = bounding_box(cloud.points);
  const double extent = std::max(box.extent().maxCoeff(), 1e-9) * options.box_scale;
  const double h = extent / (n - 1);
  ScalarGrid grid(n, box.center() - Vec3::Constant(0.5 * extent), h, 0.0);

  const std::size_t total = grid.values.size();
  std::vector<double> field[3] = {std::vector<double>(total, 0.0), std::vector<double>(total, 0.0),
                                  std::vector<double>(total, 0.0)};
  for (std::size_t p = 0; p < cloud.size(); ++p) {
    for (int a = 0; a < 3; ++a) splat(field[a], grid, a, cloud.points[p], cloud.normals[p][a]);
  }

  // b = -h^2 div V, divergence by central differences of the staggered field.
  std::vector<double> b(total, 0.0);
  const std::size_t stride[3] = {1, static_cast<std::size_t>(n), static_cast<std::size_t>(n) * n};
  for (int k = 1; k < n - 1; ++k) {
    for (int j = 1; j < n - 1; ++j) {
      for (int i = 1; i < n - 1; ++i) {
        const std::size_t id = grid.index(i, j, k);
        double div = 0.0;
        for (int a = 0; a < 3; ++a) div += field[a][id] - field[a][id - stride[a]];
        b[id] = -h * div;
      }
    }
  }

  // Conjugate gradients from zero.
  std::vector<double>& x = grid.values;
  std::vector<double> r = b;
  std::vector<double> d = r;
  std::vector<double> ad(total, 0.0);
  const double b_norm = std::sqrt(deterministic_dot(b, b));
  const int max_iter = options.max_iterations > 0 ? options.max_iterations : 10 * n;
  double rr = deterministic_dot(r, r);
  int iter = 0;
  if (b_norm > 0.0) {
    while (std::sqrt(rr) > options.tolerance * b_norm) {
      if (iter == max_iter) {
        throw ConvergenceError("Poisson solve did not converge", iter, std::sqrt(rr) / b_norm);
      }
      apply_laplacian(d, ad, n);
      const double alpha = rr / deterministic_dot(d, ad);
      parallel_for(total, 1 << 14, [&](std::size_t s, std::size_t e) {
        for (std::size_t q = s; q < e; ++q) {
          x[q] += alpha * d[q];
          r[q] -= alpha * ad[q];
        }
      });
      const double rr_next = deterministic_dot(r, r);
      const double beta = rr_next / rr;
      rr = rr_next;
      parallel_for(total, 1 << 14, [&](std::size_t s, std::size_t e) {
        for (std::size_t q = s; q < e; ++q) d[q] = r[q] + beta * d[q];
      });
      ++iter;
    }
  }
  log::debug(fmt::format("Poisson CG: {} iterations, relative residual {:.2e}", iter,
                         b_norm > 0.0 ? std::sqrt(rr) / b_norm : 0.0));

  std::vector<double> at_points(cloud.size());
  for (std::size_t p = 0; p < cloud.size(); ++p) at_points[p] = grid.sample(cloud.points[p]);
  const double shift = deterministic_sum(at_points) / static_cast<double>(cloud.size());
  for (double& v : x) v -= shift;
  return grid;
}

TriMesh poisson_mesh(const OrientedPointCloud& cloud, const PoissonOptions& options) {
  ScalarGrid grid = poisson_reconstruct(cloud, options);
  for (double& v : grid.values) v = -v;
  return marching_cubes(grid, 0.0);
}

}  // namespace orbitcarve
