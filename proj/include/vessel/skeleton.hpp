#pragma once

#include <array>
#include <cstddef>

#include "vessel/volume.hpp"

namespace vessel {

struct Skeleton {
  BinaryMask mask;
  std::size_t source_count = 0;
};

/// Topology-preserving curve thinning in the voxel grid (spacing ignored).
///
/// Each iteration runs six directional subcycles (+z, -z, -y, +y, +x, -x).
/// A subcycle collects border voxels whose neighbor in that direction is
/// background, then deletes them one at a time in ascending linear index,
/// re-checking just before each deletion that the voxel is still simple and
/// is not an endpoint (exactly one 26-neighbor). Iterates to a fixed point.
Skeleton skeletonize(const BinaryMask& m);

namespace topology {

/// 3x3x3 neighborhood, index (dx+1) + 3 (dy+1) + 9 (dz+1); slot 13 is the center.
using Neighborhood = std::array<bool, 27>;

/// True when removing the center preserves the number of 26-connected
/// foreground components and 6-connected background components locally.
bool is_simple(const Neighborhood& n);

int foreground_neighbor_count(const Neighborhood& n);

}  // namespace topology

}  // namespace vessel
