#pragma once

#include <cstdint>
#include <vector>

#include "vessel/volume.hpp"

namespace vessel {

/// How distances are measured: in voxel steps (spacing treated as 1,1,1) or in mm.
enum class DistanceMetric { VoxelIsotropic, Physical };

/// Squared distance from every voxel center to the nearest foreground voxel
/// center. Zero on the foreground; +infinity everywhere when the mask is empty.
struct DistanceField {
  Dims dims;
  Spacing spacing;
  std::vector<double> values;

  double operator[](std::size_t i) const noexcept { return values[i]; }
};

struct ComponentLabeling {
  Dims dims;
  std::vector<std::uint32_t> ids;  // 0 = background, 1..k otherwise
  std::vector<std::size_t> sizes;  // sizes[id - 1]

  std::size_t component_count() const noexcept { return sizes.size(); }
};

enum class Connectivity { Face6 = 6, Full26 = 26 };

/// Exact squared Euclidean distance transform, one lower-envelope pass per axis
/// (Felzenszwalb & Huttenlocher).
DistanceField squared_edt(const BinaryMask& m, DistanceMetric metric);

/// Voxels whose squared distance is <= radius^2.
BinaryMask threshold(const DistanceField& field, double radius);

/// Ball dilation: {p : edt(m)(p) <= radius^2}.
BinaryMask dilate(const BinaryMask& m, double radius,
                  DistanceMetric metric = DistanceMetric::VoxelIsotropic);

/// Ball erosion, the dual of dilate: keeps voxels farther than `radius` from
/// every background voxel. Outside the volume does not count as background.
BinaryMask erode(const BinaryMask& m, double radius,
                 DistanceMetric metric = DistanceMetric::VoxelIsotropic);

/// Foreground voxels with a 6-adjacent background neighbor or on the volume border.
BinaryMask boundary(const BinaryMask& m);

/// Labels are assigned in order of each component's smallest linear index.
ComponentLabeling connected_components(const BinaryMask& m,
                                       Connectivity connectivity = Connectivity::Full26);

}  // namespace vessel
