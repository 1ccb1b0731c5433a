#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vessel/error.hpp"

namespace vessel {

/// Grid extent in voxels. Linear order is x-fastest, matching NIfTI-1 on disk.
struct Dims {
  std::int64_t nx = 1;
  std::int64_t ny = 1;
  std::int64_t nz = 1;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(nx * ny * nz);
  }
  std::size_t index(std::int64_t x, std::int64_t y, std::int64_t z) const noexcept {
    return static_cast<std::size_t>(x + nx * (y + ny * z));
  }
  std::array<std::int64_t, 3> coords(std::size_t i) const noexcept {
    const auto li = static_cast<std::int64_t>(i);
    return {li % nx, (li / nx) % ny, li / (nx * ny)};
  }
  bool contains(std::int64_t x, std::int64_t y, std::int64_t z) const noexcept {
    return x >= 0 && y >= 0 && z >= 0 && x < nx && y < ny && z < nz;
  }
  std::int64_t operator[](int axis) const noexcept {
    return axis == 0 ? nx : (axis == 1 ? ny : nz);
  }

  bool operator==(const Dims&) const = default;
};

std::string to_string(const Dims& d);

/// Physical voxel size in mm.
class Spacing {
public:
  Spacing() = default;
  Spacing(double dx, double dy, double dz);

  double dx() const noexcept { return v_[0]; }
  double dy() const noexcept { return v_[1]; }
  double dz() const noexcept { return v_[2]; }
  double operator[](int axis) const noexcept { return v_[axis]; }

  static Spacing isotropic() { return {1.0, 1.0, 1.0}; }

  // Exact comparison; mismatched grids must be resampled by the caller.
  bool operator==(const Spacing&) const = default;

private:
  std::array<double, 3> v_{1.0, 1.0, 1.0};
};

std::string to_string(const Spacing& s);

/// Dense immutable boolean voxel grid. Storage is one byte per voxel (0 or 1).
class BinaryMask {
public:
  BinaryMask(Dims dims, Spacing spacing, std::vector<std::uint8_t> voxels);

  static BinaryMask empty(Dims dims, Spacing spacing = Spacing::isotropic());
  static BinaryMask full(Dims dims, Spacing spacing = Spacing::isotropic());

  const Dims& dims() const noexcept { return dims_; }
  const Spacing& spacing() const noexcept { return spacing_; }
  std::span<const std::uint8_t> voxels() const noexcept { return voxels_; }
  std::size_t size() const noexcept { return voxels_.size(); }

  bool operator[](std::size_t i) const noexcept { return voxels_[i] != 0; }
  bool at(std::int64_t x, std::int64_t y, std::int64_t z) const noexcept {
    return voxels_[dims_.index(x, y, z)] != 0;
  }

  std::size_t count() const noexcept;
  bool is_empty() const noexcept { return count() == 0; }

  bool operator==(const BinaryMask&) const = default;

private:
  Dims dims_;
  Spacing spacing_;
  std::vector<std::uint8_t> voxels_;
};

/// make_mask from a boolean sequence; validates dims, spacing and length.
BinaryMask make_mask(Dims dims, Spacing spacing, std::span<const bool> voxels);
BinaryMask make_mask(Dims dims, Spacing spacing, const std::vector<bool>& voxels);

enum class BoolOp { And, Or, Xor, Minus };

BinaryMask boolean_op(const BinaryMask& a, const BinaryMask& b, BoolOp mode);
std::size_t count(const BinaryMask& a);

/// Throws ShapeMismatch / SpacingMismatch when the grids differ.
void require_same_grid(const Dims& da, const Spacing& sa, const Dims& db, const Spacing& sb);
void require_same_grid(const BinaryMask& a, const BinaryMask& b);

enum class VesselClass : std::uint8_t { Background = 0, Hepatic = 1, Portal = 2 };

/// Dense label grid with values in {0 = background, 1 = hepatic, 2 = portal}.
class LabelVolume {
public:
  LabelVolume(Dims dims, Spacing spacing, std::vector<std::uint8_t> labels);

  static LabelVolume from_mask(const BinaryMask& m);

  const Dims& dims() const noexcept { return dims_; }
  const Spacing& spacing() const noexcept { return spacing_; }
  std::span<const std::uint8_t> labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  std::uint8_t operator[](std::size_t i) const noexcept { return labels_[i]; }

  BinaryMask class_mask(VesselClass c) const;
  /// Any non-background label.
  BinaryMask foreground() const;

  bool operator==(const LabelVolume&) const = default;

private:
  Dims dims_;
  Spacing spacing_;
  std::vector<std::uint8_t> labels_;
};

}  // namespace vessel
