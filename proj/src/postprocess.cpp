#include "vessel/postprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace vessel {

BinaryMask apply_liver_mask(const BinaryMask& vessels, const BinaryMask& liver) {
  return boolean_op(vessels, liver, BoolOp::And);
}

LabelVolume apply_liver_mask(const LabelVolume& vessels, const BinaryMask& liver) {
  require_same_grid(vessels.dims(), vessels.spacing(), liver.dims(), liver.spacing());
  std::vector<std::uint8_t> out(vessels.labels().begin(), vessels.labels().end());
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!liver[i]) out[i] = 0;
  return LabelVolume(vessels.dims(), vessels.spacing(), std::move(out));
}

namespace {

// Component ids are ordered by first voxel, so the first maximum wins ties.
std::uint32_t largest_id(const ComponentLabeling& cc) {
  if (cc.sizes.empty()) return 0;
  const auto it = std::max_element(cc.sizes.begin(), cc.sizes.end());
  return static_cast<std::uint32_t>(it - cc.sizes.begin()) + 1;
}

}  // namespace

BinaryMask keep_largest_component(const BinaryMask& m, Connectivity connectivity) {
  const auto cc = connected_components(m, connectivity);
  const auto keep = largest_id(cc);
  std::vector<std::uint8_t> out(m.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = keep != 0 && cc.ids[i] == keep;
  return BinaryMask(m.dims(), m.spacing(), std::move(out));
}

LabelVolume keep_largest_per_class(const LabelVolume& v, Connectivity connectivity) {
  std::vector<std::uint8_t> out(v.labels().begin(), v.labels().end());
  for (auto c : {VesselClass::Hepatic, VesselClass::Portal}) {
    const auto kept = keep_largest_component(v.class_mask(c), connectivity);
    const auto value = static_cast<std::uint8_t>(c);
    for (std::size_t i = 0; i < out.size(); ++i)
      if (out[i] == value && !kept[i]) out[i] = 0;
  }
  return LabelVolume(v.dims(), v.spacing(), std::move(out));
}

namespace {

// Source index nearest to each output position along one axis; exact half-way
// ties go to the lower index.
std::vector<std::int64_t> nearest_axis(std::int64_t n_in, double s_in, double s_out,
                                       std::int64_t& n_out) {
  n_out = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::llround(static_cast<double>(n_in) * s_in / s_out)));
  std::vector<std::int64_t> map(static_cast<std::size_t>(n_out));
  for (std::int64_t j = 0; j < n_out; ++j) {
    const double t = static_cast<double>(j) * s_out / s_in;
    const auto i = static_cast<std::int64_t>(std::ceil(t - 0.5));
    map[static_cast<std::size_t>(j)] = std::clamp<std::int64_t>(i, 0, n_in - 1);
  }
  return map;
}

template <typename Fn>
std::vector<std::uint8_t> resample_bytes(const Dims& d, const Spacing& s, const Spacing& target,
                                         Dims& out_dims, Fn&& at) {
  std::array<std::vector<std::int64_t>, 3> maps;
  std::array<std::int64_t, 3> n{};
  for (int a = 0; a < 3; ++a) maps[a] = nearest_axis(d[a], s[a], target[a], n[a]);
  out_dims = Dims{n[0], n[1], n[2]};
  std::vector<std::uint8_t> out(out_dims.size());
  std::size_t o = 0;
  for (std::int64_t z = 0; z < n[2]; ++z)
    for (std::int64_t y = 0; y < n[1]; ++y)
      for (std::int64_t x = 0; x < n[0]; ++x)
        out[o++] = at(d.index(maps[0][x], maps[1][y], maps[2][z]));
  return out;
}

}  // namespace

LabelVolume resample_nearest(const LabelVolume& v, const Spacing& target) {
  Dims out_dims;
  auto bytes = resample_bytes(v.dims(), v.spacing(), target, out_dims,
                              [&](std::size_t i) { return v[i]; });
  return LabelVolume(out_dims, target, std::move(bytes));
}

BinaryMask resample_nearest(const BinaryMask& m, const Spacing& target) {
  Dims out_dims;
  auto bytes = resample_bytes(m.dims(), m.spacing(), target, out_dims,
                              [&](std::size_t i) { return static_cast<std::uint8_t>(m[i]); });
  return BinaryMask(out_dims, target, std::move(bytes));
}

}  // namespace vessel
