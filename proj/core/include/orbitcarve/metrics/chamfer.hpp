#pragma once

#include <cstdint>
#include <vector>

#include "orbitcarve/geometry/mesh.hpp"
#include "orbitcarve/metrics/bvh.hpp"

namespace orbitcarve {

struct SurfaceSamples {
  std::vector<Vec3> points;
  std::vector<int> faces;  // face each point was drawn from
};

// Area-weighted uniform samples. Throws InvariantError when the total area is zero.
SurfaceSamples sample_surface(const TriMesh& mesh, std::size_t count, std::uint64_t seed);

struct ChamferResult {
  double mean = 0.0;     // (mean_ab + mean_ba) / 2
  double rms = 0.0;      // sqrt of the averaged mean squared distances
  double mean_ab = 0.0;  // samples of a to the surface of b
  double mean_ba = 0.0;
  double rms_ab = 0.0;
  double rms_ba = 0.0;
  std::size_t samples = 0;  // per direction
  std::uint64_t seed = 0;
};

// Both meshes are sampled with `seed`, so swapping the arguments swaps the
// directional terms and leaves the symmetric ones unchanged.
ChamferResult chamfer(const TriMesh& a, const TriMesh& b, std::size_t samples, std::uint64_t seed);

// All-pairs point-to-triangle reference, for small instances.
ChamferResult chamfer_brute_force(const TriMesh& a, const TriMesh& b, std::size_t samples,
                                  std::uint64_t seed);

// Symmetric mean dot product between face normals at samples and face normals
// at their nearest points on the other mesh.
double normal_consistency(const TriMesh& a, const TriMesh& b, std::size_t samples,
                          std::uint64_t seed);

}  // namespace orbitcarve
