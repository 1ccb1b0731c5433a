#pragma once

#include "vessel/morphology.hpp"
#include "vessel/skeleton.hpp"
#include "vessel/volume.hpp"

namespace vessel {

// Empty-mask convention shared by every metric here: both masks empty -> 1,
// exactly one empty -> 0.

struct ClDiceBreakdown {
  double t_prec = 0.0;
  double t_sens = 0.0;
  double cldice = 0.0;
};

enum class ClDiceMode {
  /// skeleton of one mask against the full other mask (original clDice)
  SkeletonVsMask,
  /// skeleton against skeleton, the literal set notation
  SkeletonVsSkeleton,
};

struct NsdConfig {
  double tau_mm = 2.0;

  NsdConfig() = default;
  explicit NsdConfig(double tau);
};

struct GeometricConfig {
  double alpha = 5.0;  // Area dilation radius
  double beta = 5.0;   // Length dilation radius
  DistanceMetric metric = DistanceMetric::VoxelIsotropic;

  GeometricConfig() = default;
  GeometricConfig(double alpha, double beta,
                  DistanceMetric metric = DistanceMetric::VoxelIsotropic);
};

double iou(const BinaryMask& a, const BinaryMask& b);
double dsc(const BinaryMask& a, const BinaryMask& b);

ClDiceBreakdown cldice(const BinaryMask& pred, const BinaryMask& ref,
                       ClDiceMode mode = ClDiceMode::SkeletonVsMask);
/// Same, reusing skeletons already computed for pred and ref.
ClDiceBreakdown cldice(const BinaryMask& pred, const BinaryMask& ref,
                       const BinaryMask& pred_skeleton, const BinaryMask& ref_skeleton,
                       ClDiceMode mode = ClDiceMode::SkeletonVsMask);

/// Boundary-voxel surface Dice with physical (mm) tolerance.
double nsd(const BinaryMask& a, const BinaryMask& b, const NsdConfig& cfg = {});

double area_measure(const BinaryMask& pred, const BinaryMask& ref, double alpha,
                    DistanceMetric metric = DistanceMetric::VoxelIsotropic);

double length_measure(const BinaryMask& pred, const BinaryMask& ref, double beta,
                      DistanceMetric metric = DistanceMetric::VoxelIsotropic);

/// Precomputed per-pair state so sweeps reuse distance fields and skeletons.
class PairGeometry {
public:
  PairGeometry(const BinaryMask& pred, const BinaryMask& ref,
               DistanceMetric metric = DistanceMetric::VoxelIsotropic);

  double area(double alpha) const;
  double length(double beta) const;
  ClDiceBreakdown cldice(ClDiceMode mode) const;

  const BinaryMask& pred_skeleton() const { return pred_skel_; }
  const BinaryMask& ref_skeleton() const { return ref_skel_; }

private:
  BinaryMask pred_;
  BinaryMask ref_;
  DistanceField pred_edt_;
  DistanceField ref_edt_;
  BinaryMask pred_skel_;
  BinaryMask ref_skel_;
};

}  // namespace vessel
