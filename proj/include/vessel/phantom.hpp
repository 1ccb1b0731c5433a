#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "vessel/volume.hpp"

namespace vessel {

struct Point3 {
  double x = 0.0, y = 0.0, z = 0.0;
  bool operator==(const Point3&) const = default;
};

/// Ordered centerline in voxel coordinates: at least two points, no two
/// consecutive points equal.
class Polyline {
public:
  explicit Polyline(std::vector<Point3> points);
  const std::vector<Point3>& points() const noexcept { return points_; }

private:
  std::vector<Point3> points_;
};

/// SplitMix64: state += 0x9E3779B97F4A7C15, then xor-shift-multiply mix.
/// Fixed so fixtures reproduce across implementations.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, 1) from the top 53 bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
  std::uint64_t state_;
};

struct TreeSpec {
  std::uint64_t seed = 1;
  int depth = 3;
  double angle_min = 0.35;  // radians
  double angle_max = 0.8;
  double root_radius = 3.0;
  double decay = 0.7;
  double length_min = 10.0;  // voxels
  double length_max = 18.0;

  void validate() const;
};

struct TreePhantom {
  BinaryMask mask;
  std::vector<Polyline> centerlines;
};

/// Segment-swept ball: voxels whose center lies within `radius` (voxels) of
/// the path. Radii reaching past the volume are clipped.
BinaryMask gen_capsule(const Polyline& path, double radius, Dims dims,
                       Spacing spacing = Spacing::isotropic());

/// Straight cylinder with flat ends: voxels whose center projects onto the
/// segment [a, b] within `radius` of the axis.
BinaryMask gen_cylinder(Point3 a, Point3 b, double radius, Dims dims,
                        Spacing spacing = Spacing::isotropic());

/// Binary branching tree. The root starts at (nx/2, ny/2, 1) heading +z;
/// every generation below `depth` spawns two children rotated by an angle in
/// [angle_min, angle_max] at opposite azimuths. Branch endpoints are rounded
/// to voxel centers and clamped into the volume. Generation g has radius
/// max(root_radius * decay^g, 1) so thin branches stay 26-connected.
TreePhantom gen_tree(const TreeSpec& spec, Dims dims, Spacing spacing = Spacing::isotropic());

namespace degrade_ops {
/// Zeroes the slab of `thickness` voxels along `axis` starting at
/// center - thickness / 2.
struct Break {
  int axis = 2;
  std::int64_t center = 0;
  std::int64_t thickness = 1;
};
struct Thicken {
  double radius = 1.0;
};
struct Thin {
  double radius = 1.0;
};
struct Shift {
  std::int64_t dx = 0, dy = 0, dz = 0;
};
}  // namespace degrade_ops

using DegradeOp = std::variant<degrade_ops::Break, degrade_ops::Thicken, degrade_ops::Thin,
                               degrade_ops::Shift>;

BinaryMask degrade(const BinaryMask& m, const std::vector<DegradeOp>& ops);

}  // namespace vessel
