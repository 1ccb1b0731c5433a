#pragma once

#include "vessel/morphology.hpp"
#include "vessel/volume.hpp"

namespace vessel {

/// AND gating: vessel voxels outside the liver become background.
BinaryMask apply_liver_mask(const BinaryMask& vessels, const BinaryMask& liver);
LabelVolume apply_liver_mask(const LabelVolume& vessels, const BinaryMask& liver);

/// Keeps only the largest connected component of each vessel class. Equal
/// sizes resolve to the component holding the smaller linear voxel index.
LabelVolume keep_largest_per_class(const LabelVolume& v,
                                   Connectivity connectivity = Connectivity::Full26);
BinaryMask keep_largest_component(const BinaryMask& m,
                                  Connectivity connectivity = Connectivity::Full26);

/// Nearest-neighbor resampling onto `target` spacing. Voxel i along an axis
/// sits at i * spacing mm; output dims are round(n * src / target), >= 1.
LabelVolume resample_nearest(const LabelVolume& v, const Spacing& target);
BinaryMask resample_nearest(const BinaryMask& m, const Spacing& target);

}  // namespace vessel
