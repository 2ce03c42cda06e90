#pragma once

#include <cmath>
#include <vector>

#include "orbitcarve/carve/halfedge_mesh.hpp"
#include "orbitcarve/geometry/types.hpp"

namespace orbitcarve::detail {

// Per-coordinate Adam over a list of 3-vectors.
struct Adam {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::vector<Vec3> m;
  std::vector<Vec3> v;
  int steps = 0;

  Adam(double b1, double b2, double eps, std::size_t n)
      : beta1(b1), beta2(b2), epsilon(eps), m(n, Vec3::Zero()), v(n, Vec3::Zero()) {}

  void step(std::vector<Vec3>& x, const std::vector<Vec3>& g, double lr) {
    ++steps;
    const double c1 = 1.0 - std::pow(beta1, steps);
    const double c2 = 1.0 - std::pow(beta2, steps);
    for (std::size_t i = 0; i < x.size(); ++i) {
      m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
      v[i] = beta2 * v[i] + (1.0 - beta2) * g[i].cwiseProduct(g[i]);
      const Vec3 mh = m[i] / c1;
      const Vec3 vh = v[i] / c2;
      x[i] -= lr * mh.cwiseQuotient((vh.cwiseSqrt().array() + epsilon).matrix());
    }
  }

  // Moments of new vertices are the weighted averages of their sources.
  void remap(const std::vector<VertexSources>& sources) {
    std::vector<Vec3> nm(sources.size(), Vec3::Zero());
    std::vector<Vec3> nv(sources.size(), Vec3::Zero());
    for (std::size_t i = 0; i < sources.size(); ++i) {
      for (const auto& [s, w] : sources[i]) {
        nm[i] += w * m[s];
        nv[i] += w * v[s];
      }
    }
    m = std::move(nm);
    v = std::move(nv);
  }
};

}  // namespace orbitcarve::detail
