#include "orbitcarve/metrics/chamfer.hpp"

#include <algorithm>
#include <cmath>

#include "orbitcarve/common/error.hpp"
#include "orbitcarve/common/parallel.hpp"
#include "orbitcarve/common/random.hpp"

namespace orbitcarve {
namespace {

constexpr std::size_t kGrain = 256;

struct Directional {
  double mean = 0.0;
  double mean_sq = 0.0;
};

template <typename Query>
Directional directional(const std::vector<Vec3>& points, const Query& query) {
  std::vector<double> dist(points.size());
  std::vector<double> dist_sq(points.size());
  parallel_for(points.size(), kGrain, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      dist_sq[i] = query(points[i]).distance_sq;
      dist[i] = std::sqrt(dist_sq[i]);
    }
  });
  const double n = static_cast<double>(points.size());
  return {deterministic_sum(dist) / n, deterministic_sum(dist_sq) / n};
}

ChamferResult combine(const Directional& ab, const Directional& ba, std::size_t samples,
                      std::uint64_t seed) {
  ChamferResult r;
  r.mean_ab = ab.mean;
  r.mean_ba = ba.mean;
  r.rms_ab = std::sqrt(ab.mean_sq);
  r.rms_ba = std::sqrt(ba.mean_sq);
  r.mean = 0.5 * (ab.mean + ba.mean);
  r.rms = std::sqrt(0.5 * (ab.mean_sq + ba.mean_sq));
  r.samples = samples;
  r.seed = seed;
  return r;
}

void require_samples(std::size_t samples) {
  if (samples == 0) throw InvariantError("surface metrics need at least one sample");
}

}  // namespace

SurfaceSamples sample_surface(const TriMesh& mesh, std::size_t count, std::uint64_t seed) {
  if (mesh.faces.empty()) throw EmptyMeshError("cannot sample an empty mesh");
  std::vector<double> cumulative(mesh.faces.size());
  double total = 0.0;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    total += 0.5 * face_area_vector(mesh, f).norm();
    cumulative[f] = total;
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw InvariantError("cannot sample a mesh with zero surface area");
  }

  Rng rng(seed);
  SurfaceSamples out;
  out.points.reserve(count);
  out.faces.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double pick = uniform01(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    if (it == cumulative.end()) --it;
    const int f = static_cast<int>(it - cumulative.begin());
    const double r1 = std::sqrt(uniform01(rng));
    const double r2 = uniform01(rng);
    const Face& t = mesh.faces[f];
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    out.points.push_back((1.0 - r1) * a + r1 * (1.0 - r2) * b + r1 * r2 * c);
    out.faces.push_back(f);
  }
  return out;
}

ChamferResult chamfer(const TriMesh& a, const TriMesh& b, std::size_t samples, std::uint64_t seed) {
  require_samples(samples);
  const SurfaceSamples sa = sample_surface(a, samples, seed);
  const SurfaceSamples sb = sample_surface(b, samples, seed);
  const TriangleBvh bvh_a(a);
  const TriangleBvh bvh_b(b);
  const Directional ab = directional(sa.points, [&](const Vec3& p) { return bvh_b.closest(p); });
  const Directional ba = directional(sb.points, [&](const Vec3& p) { return bvh_a.closest(p); });
  return combine(ab, ba, samples, seed);
}

ChamferResult chamfer_brute_force(const TriMesh& a, const TriMesh& b, std::size_t samples,
                                  std::uint64_t seed) {
  require_samples(samples);
  const SurfaceSamples sa = sample_surface(a, samples, seed);
  const SurfaceSamples sb = sample_surface(b, samples, seed);
  const Directional ab = directional(sa.points, [&](const Vec3& p) { return closest_brute_force(b, p); });
  const Directional ba = directional(sb.points, [&](const Vec3& p) { return closest_brute_force(a, p); });
  return combine(ab, ba, samples, seed);
}

double normal_consistency(const TriMesh& a, const TriMesh& b, std::size_t samples,
                          std::uint64_t seed) {
  require_samples(samples);
  auto one_way = [&](const TriMesh& from, const TriMesh& to) {
    const SurfaceSamples s = sample_surface(from, samples, seed);
    const TriangleBvh bvh(to);
    std::vector<double> dots(samples);
    parallel_for(samples, kGrain, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const SurfaceHit hit = bvh.closest(s.points[i]);
        const Vec3 na = face_area_vector(from, s.faces[i]).normalized();
        const Vec3 nb = face_area_vector(to, hit.face);
        const double len = nb.norm();
        dots[i] = len > 0.0 ? na.dot(nb / len) : 0.0;
      }
    });
    return deterministic_sum(dots) / static_cast<double>(samples);
  };
  return 0.5 * (one_way(a, b) + one_way(b, a));
}

}  // namespace orbitcarve
