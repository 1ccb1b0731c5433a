#include "vessel/volume.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vessel {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::BadDims: return "BadDims";
    case ErrorCode::BadSpacing: return "BadSpacing";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::SpacingMismatch: return "SpacingMismatch";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedDatatype: return "UnsupportedDatatype";
    case ErrorCode::TruncatedData: return "TruncatedData";
    case ErrorCode::LabelRange: return "LabelRange";
    case ErrorCode::DimsTooLarge: return "DimsTooLarge";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NegativeRadius: return "NegativeRadius";
    case ErrorCode::PathOutOfBounds: return "PathOutOfBounds";
    case ErrorCode::SpecInvalid: return "SpecInvalid";
    case ErrorCode::MissingMetric: return "MissingMetric";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

std::string to_string(const Dims& d) {
  std::ostringstream os;
  os << d.nx << "x" << d.ny << "x" << d.nz;
  return os.str();
}

std::string to_string(const Spacing& s) {
  std::ostringstream os;
  os << s.dx() << "x" << s.dy() << "x" << s.dz() << " mm";
  return os.str();
}

Spacing::Spacing(double dx, double dy, double dz) : v_{dx, dy, dz} {
  for (double c : v_) {
    if (!std::isfinite(c) || c <= 0.0) {
      throw Error(ErrorCode::BadSpacing, "spacing components must be finite and > 0, got " +
                                             to_string(*this));
    }
  }
}

namespace {

void check_dims(const Dims& d) {
  if (d.nx < 1 || d.ny < 1 || d.nz < 1) {
    throw Error(ErrorCode::BadDims, "every dimension must be >= 1, got " + to_string(d));
  }
}

void check_length(const Dims& d, std::size_t n) {
  if (n != d.size()) {
    throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(d.size()) +
                                               " voxels for " + to_string(d) + ", got " +
                                               std::to_string(n));
  }
}

}  // namespace

BinaryMask::BinaryMask(Dims dims, Spacing spacing, std::vector<std::uint8_t> voxels)
    : dims_(dims), spacing_(spacing), voxels_(std::move(voxels)) {
  check_dims(dims_);
  check_length(dims_, voxels_.size());
  for (auto& v : voxels_) v = v != 0 ? 1 : 0;
}

BinaryMask BinaryMask::empty(Dims dims, Spacing spacing) {
  check_dims(dims);
  return BinaryMask(dims, spacing, std::vector<std::uint8_t>(dims.size(), 0));
}

BinaryMask BinaryMask::full(Dims dims, Spacing spacing) {
  check_dims(dims);
  return BinaryMask(dims, spacing, std::vector<std::uint8_t>(dims.size(), 1));
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(voxels_.begin(), voxels_.end(), std::uint8_t{1}));
}

BinaryMask make_mask(Dims dims, Spacing spacing, std::span<const bool> voxels) {
  check_dims(dims);
  check_length(dims, voxels.size());
  std::vector<std::uint8_t> bytes(voxels.begin(), voxels.end());
  return BinaryMask(dims, spacing, std::move(bytes));
}

BinaryMask make_mask(Dims dims, Spacing spacing, const std::vector<bool>& voxels) {
  check_dims(dims);
  check_length(dims, voxels.size());
  std::vector<std::uint8_t> bytes(voxels.begin(), voxels.end());
  return BinaryMask(dims, spacing, std::move(bytes));
}

void require_same_grid(const Dims& da, const Spacing& sa, const Dims& db, const Spacing& sb) {
  if (da != db) {
    throw Error(ErrorCode::ShapeMismatch, to_string(da) + " vs " + to_string(db));
  }
  if (sa != sb) {
    throw Error(ErrorCode::SpacingMismatch, to_string(sa) + " vs " + to_string(sb));
  }
}

void require_same_grid(const BinaryMask& a, const BinaryMask& b) {
  require_same_grid(a.dims(), a.spacing(), b.dims(), b.spacing());
}

BinaryMask boolean_op(const BinaryMask& a, const BinaryMask& b, BoolOp mode) {
  require_same_grid(a, b);
  const auto va = a.voxels();
  const auto vb = b.voxels();
  std::vector<std::uint8_t> out(va.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    switch (mode) {
      case BoolOp::And: out[i] = va[i] & vb[i]; break;
      case BoolOp::Or: out[i] = va[i] | vb[i]; break;
      case BoolOp::Xor: out[i] = va[i] ^ vb[i]; break;
      case BoolOp::Minus: out[i] = va[i] & (vb[i] ^ 1); break;
    }
  }
  return BinaryMask(a.dims(), a.spacing(), std::move(out));
}

std::size_t count(const BinaryMask& a) { return a.count(); }

LabelVolume::LabelVolume(Dims dims, Spacing spacing, std::vector<std::uint8_t> labels)
    : dims_(dims), spacing_(spacing), labels_(std::move(labels)) {
  check_dims(dims_);
  check_length(dims_, labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] > 2) {
      throw Error(ErrorCode::LabelRange, "label " + std::to_string(labels_[i]) +
                                             " at voxel " + std::to_string(i) +
                                             " is outside {0,1,2}");
    }
  }
}

LabelVolume LabelVolume::from_mask(const BinaryMask& m) {
  return LabelVolume(m.dims(), m.spacing(), std::vector<std::uint8_t>(m.voxels().begin(),
                                                                      m.voxels().end()));
}

BinaryMask LabelVolume::class_mask(VesselClass c) const {
  const auto value = static_cast<std::uint8_t>(c);
  std::vector<std::uint8_t> out(labels_.size());
  std::transform(labels_.begin(), labels_.end(), out.begin(),
                 [value](std::uint8_t l) { return static_cast<std::uint8_t>(l == value); });
  return BinaryMask(dims_, spacing_, std::move(out));
}

BinaryMask LabelVolume::foreground() const {
  std::vector<std::uint8_t> out(labels_.size());
  std::transform(labels_.begin(), labels_.end(), out.begin(),
                 [](std::uint8_t l) { return static_cast<std::uint8_t>(l != 0); });
  return BinaryMask(dims_, spacing_, std::move(out));
}

}  // namespace vessel
