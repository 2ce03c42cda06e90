#pragma once

#include "orbitcarve/geometry/mesh.hpp"
#include "orbitcarve/init/scalar_grid.hpp"

namespace orbitcarve {

// Triangulates the iso-surface of `grid`, treating values above `iso` as
// inside; faces wind counter-clockwise seen from outside. Vertices on shared
// cube edges are emitted once. Throws EmptyMeshError when no cell straddles iso.
TriMesh marching_cubes(const ScalarGrid& grid, double iso);

}  // namespace orbitcarve
