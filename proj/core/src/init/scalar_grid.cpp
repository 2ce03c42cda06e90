#include "orbitcarve/init/scalar_grid.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "orbitcarve/common/error.hpp"

namespace orbitcarve {

ScalarGrid::ScalarGrid(int n, const Vec3& origin_, double spacing_, double fill)
    : resolution(n),
      origin(origin_),
      spacing(spacing_),
      values(static_cast<std::size_t>(n) * n * n, fill) {}

double ScalarGrid::sample(const Vec3& p) const {
  const Vec3 u = (p - origin) / spacing;
  int i0[3];
  double t[3];
  for (int a = 0; a < 3; ++a) {
    const double c = std::clamp(u[a], 0.0, static_cast<double>(resolution - 1));
    i0[a] = std::min(static_cast<int>(c), resolution - 2);
    t[a] = c - i0[a];
  }
  double s = 0.0;
  for (int c = 0; c < 8; ++c) {
    const int dx = c & 1, dy = (c >> 1) & 1, dz = (c >> 2) & 1;
    const double w = (dx ? t[0] : 1.0 - t[0]) * (dy ? t[1] : 1.0 - t[1]) * (dz ? t[2] : 1.0 - t[2]);
    s += w * at(i0[0] + dx, i0[1] + dy, i0[2] + dz);
  }
  return s;
}

void ScalarGrid::validate() const {
  if (resolution < 2) throw InvariantError(fmt::format("grid resolution must be ≥ 2 (got {})", resolution));
  if (!(spacing > 0.0)) throw InvariantError(fmt::format("grid spacing must be positive (got {})", spacing));
  const std::size_t n = static_cast<std::size_t>(resolution) * resolution * resolution;
  if (values.size() != n) {
    throw InvariantError(fmt::format("grid holds {} values, expected {}", values.size(), n));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InvariantError("grid holds non-finite values");
  }
}

ScalarGrid box_filter(const ScalarGrid& grid) {
  const int n = grid.resolution;
  ScalarGrid out(n, grid.origin, grid.spacing);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        int count = 0;
        for (int dk = -1; dk <= 1; ++dk) {
          for (int dj = -1; dj <= 1; ++dj) {
            for (int di = -1; di <= 1; ++di) {
              const int a = i + di, b = j + dj, c = k + dk;
              if (a < 0 || b < 0 || c < 0 || a >= n || b >= n || c >= n) continue;
              s += grid.at(a, b, c);
              ++count;
            }
          }
        }
        out.at(i, j, k) = s / count;
      }
    }
  }
  return out;
}

ScalarGrid padded(const ScalarGrid& grid, int layers, double value) {
  const int n = grid.resolution + 2 * layers;
  ScalarGrid out(n, grid.origin - layers * grid.spacing * Vec3::Ones(), grid.spacing, value);
  for (int k = 0; k < grid.resolution; ++k) {
    for (int j = 0; j < grid.resolution; ++j) {
      for (int i = 0; i < grid.resolution; ++i) out.at(i + layers, j + layers, k + layers) = grid.at(i, j, k);
    }
  }
  return out;
}

}  // namespace orbitcarve
