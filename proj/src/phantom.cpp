#include "vessel/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vessel/morphology.hpp"

namespace vessel {

Polyline::Polyline(std::vector<Point3> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw Error(ErrorCode::SpecInvalid, "polyline needs at least two points");
  }
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i] == points_[i - 1]) {
      throw Error(ErrorCode::SpecInvalid,
                  "polyline has repeated consecutive point at " + std::to_string(i));
    }
  }
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

void TreeSpec::validate() const {
  std::ostringstream why;
  if (depth < 1) why << "depth must be >= 1; ";
  if (!(root_radius > 0.0)) why << "root_radius must be > 0; ";
  if (!(decay > 0.0 && decay <= 1.0)) why << "decay must be in (0, 1]; ";
  if (!(angle_min >= 0.0 && angle_min <= angle_max)) why << "angle range invalid; ";
  if (!(length_min > 0.0 && length_min <= length_max)) why << "length range invalid; ";
  if (!why.str().empty()) throw Error(ErrorCode::SpecInvalid, why.str());
}

namespace {

struct Vec3 {
  double x, y, z;
};

Vec3 sub(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
Vec3 scale(const Vec3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }
Vec3 add(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 normalized(const Vec3& a) { return scale(a, 1.0 / std::sqrt(dot(a, a))); }

// Squared distance from p to segment [a, b]. Written as |ap|^2 - proj^2 so
// integer-aligned geometry stays exact.
double segment_distance2(const Point3& p, const Point3& a, const Point3& b) {
  const Vec3 ab = sub(b, a);
  const Vec3 ap = sub(p, a);
  const double len2 = dot(ab, ab);
  const double t = dot(ap, ab);
  if (t <= 0.0) return dot(ap, ap);
  if (t >= len2) {
    const Vec3 bp = sub(p, b);
    return dot(bp, bp);
  }
  return std::max(0.0, dot(ap, ap) - t * t / len2);
}

void require_inside(const Point3& p, const Dims& d) {
  const auto inside = [](double v, std::int64_t n) {
    return v >= 0.0 && v <= static_cast<double>(n - 1);
  };
  if (!inside(p.x, d.nx) || !inside(p.y, d.ny) || !inside(p.z, d.nz)) {
    std::ostringstream os;
    os << "point (" << p.x << ", " << p.y << ", " << p.z << ") outside " << to_string(d);
    throw Error(ErrorCode::PathOutOfBounds, os.str());
  }
}

// Visits voxels within the axis-aligned box around [a, b] grown by `radius`.
template <typename Fn>
void for_box(const Point3& a, const Point3& b, double radius, const Dims& d, Fn&& fn) {
  const auto lo = [&](double u, double v) {
    return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(std::min(u, v) - radius)));
  };
  const auto hi = [&](double u, double v, std::int64_t n) {
    return std::min<std::int64_t>(n - 1,
                                  static_cast<std::int64_t>(std::ceil(std::max(u, v) + radius)));
  };
  for (auto z = lo(a.z, b.z); z <= hi(a.z, b.z, d.nz); ++z)
    for (auto y = lo(a.y, b.y); y <= hi(a.y, b.y, d.ny); ++y)
      for (auto x = lo(a.x, b.x); x <= hi(a.x, b.x, d.nx); ++x) fn(x, y, z);
}

void paint_capsule(std::vector<std::uint8_t>& out, const Dims& d, const Point3& a,
                   const Point3& b, double radius) {
  const double r2 = radius * radius;
  for_box(a, b, radius, d, [&](std::int64_t x, std::int64_t y, std::int64_t z) {
    const Point3 p{static_cast<double>(x), static_cast<double>(y), static_cast<double>(z)};
    if (segment_distance2(p, a, b) <= r2) out[d.index(x, y, z)] = 1;
  });
}

void require_dims(const Dims& d) {
  if (d.nx < 1 || d.ny < 1 || d.nz < 1) {
    throw Error(ErrorCode::BadDims, "every dimension must be >= 1, got " + to_string(d));
  }
}

}  // namespace

BinaryMask gen_capsule(const Polyline& path, double radius, Dims dims, Spacing spacing) {
  if (!(radius >= 0.0)) {
    throw Error(ErrorCode::NegativeRadius, "capsule radius " + std::to_string(radius));
  }
  require_dims(dims);
  for (const auto& p : path.points()) require_inside(p, dims);
  std::vector<std::uint8_t> bytes(dims.size(), 0);
  const auto& pts = path.points();
  for (std::size_t i = 1; i < pts.size(); ++i) paint_capsule(bytes, dims, pts[i - 1], pts[i], radius);
  return BinaryMask(dims, spacing, std::move(bytes));
}

BinaryMask gen_cylinder(Point3 a, Point3 b, double radius, Dims dims, Spacing spacing) {
  if (!(radius >= 0.0)) {
    throw Error(ErrorCode::NegativeRadius, "cylinder radius " + std::to_string(radius));
  }
  Polyline axis({a, b});  // rejects a == b
  require_dims(dims);
  require_inside(a, dims);
  require_inside(b, dims);
  std::vector<std::uint8_t> bytes(dims.size(), 0);
  const Vec3 ab = sub(b, a);
  const double len2 = dot(ab, ab);
  const double r2 = radius * radius;
  for_box(a, b, radius, dims, [&](std::int64_t x, std::int64_t y, std::int64_t z) {
    const Point3 p{static_cast<double>(x), static_cast<double>(y), static_cast<double>(z)};
    const Vec3 ap = sub(p, a);
    const double t = dot(ap, ab);
    if (t < 0.0 || t > len2) return;
    if (dot(ap, ap) - t * t / len2 <= r2) bytes[dims.index(x, y, z)] = 1;
  });
  return BinaryMask(dims, spacing, std::move(bytes));
}

namespace {

struct TreeBuilder {
  const TreeSpec& spec;
  Dims dims;
  SplitMix64 rng;
  std::vector<std::uint8_t> bytes;
  std::vector<Polyline> centerlines;

  Point3 snap(const Vec3& v) const {
    const auto clamp_axis = [](double c, std::int64_t n) {
      return std::clamp(std::round(c), 0.0, static_cast<double>(n - 1));
    };
    return {clamp_axis(v.x, dims.nx), clamp_axis(v.y, dims.ny), clamp_axis(v.z, dims.nz)};
  }

  // Rotates `dir` by `angle` toward the perpendicular chosen by `azimuth`.
  static Vec3 tilt(const Vec3& dir, double angle, double azimuth) {
    const Vec3 helper = std::abs(dir.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    const Vec3 u = normalized(cross(dir, helper));
    const Vec3 v = cross(dir, u);
    const Vec3 perp = add(scale(u, std::cos(azimuth)), scale(v, std::sin(azimuth)));
    return normalized(add(scale(dir, std::cos(angle)), scale(perp, std::sin(angle))));
  }

  void grow(const Point3& start, const Vec3& dir, int generation) {
    const double length = rng.uniform(spec.length_min, spec.length_max);
    const Point3 end = snap(add({start.x, start.y, start.z}, scale(dir, length)));
    if (end == start) return;
    const double radius =
        std::max(spec.root_radius * std::pow(spec.decay, generation), 1.0);
    paint_capsule(bytes, dims, start, end, radius);
    centerlines.emplace_back(std::vector<Point3>{start, end});
    if (generation + 1 >= spec.depth) return;

    const Vec3 actual = normalized(sub(end, start));
    const double azimuth = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double a1 = rng.uniform(spec.angle_min, spec.angle_max);
    const double a2 = rng.uniform(spec.angle_min, spec.angle_max);
    grow(end, tilt(actual, a1, azimuth), generation + 1);
    grow(end, tilt(actual, a2, azimuth + std::numbers::pi), generation + 1);
  }
};

}  // namespace

TreePhantom gen_tree(const TreeSpec& spec, Dims dims, Spacing spacing) {
  spec.validate();
  require_dims(dims);
  TreeBuilder b{spec, dims, SplitMix64(spec.seed), std::vector<std::uint8_t>(dims.size(), 0), {}};
  const Point3 root = b.snap({static_cast<double>(dims.nx / 2), static_cast<double>(dims.ny / 2),
                              std::min(1.0, static_cast<double>(dims.nz - 1))});
  b.grow(root, {0.0, 0.0, 1.0}, 0);
  return {BinaryMask(dims, spacing, std::move(b.bytes)), std::move(b.centerlines)};
}

namespace {

BinaryMask apply_break(const BinaryMask& m, const degrade_ops::Break& op) {
  const Dims d = m.dims();
  const std::int64_t first = op.center - op.thickness / 2;
  const std::int64_t last = first + op.thickness;  // exclusive
  std::vector<std::uint8_t> out(m.voxels().begin(), m.voxels().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto c = d.coords(i)[op.axis];
    if (c >= first && c < last) out[i] = 0;
  }
  return BinaryMask(d, m.spacing(), std::move(out));
}

BinaryMask apply_shift(const BinaryMask& m, const degrade_ops::Shift& op) {
  const Dims d = m.dims();
  auto out = std::vector<std::uint8_t>(d.size(), 0);
  for (std::int64_t z = 0; z < d.nz; ++z)
    for (std::int64_t y = 0; y < d.ny; ++y)
      for (std::int64_t x = 0; x < d.nx; ++x) {
        if (!m.at(x, y, z)) continue;
        const auto tx = x + op.dx, ty = y + op.dy, tz = z + op.dz;
        if (d.contains(tx, ty, tz)) out[d.index(tx, ty, tz)] = 1;
      }
  return BinaryMask(d, m.spacing(), std::move(out));
}

}  // namespace

BinaryMask degrade(const BinaryMask& m, const std::vector<DegradeOp>& ops) {
  BinaryMask cur = m;
  for (const auto& op : ops) {
    cur = std::visit(
        [&](const auto& o) -> BinaryMask {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, degrade_ops::Break>) {
            if (o.axis < 0 || o.axis > 2 || o.thickness < 0) {
              throw Error(ErrorCode::SpecInvalid, "break needs axis in 0..2, thickness >= 0");
            }
            return apply_break(cur, o);
          } else if constexpr (std::is_same_v<T, degrade_ops::Thicken>) {
            return dilate(cur, o.radius);
          } else if constexpr (std::is_same_v<T, degrade_ops::Thin>) {
            return erode(cur, o.radius);
          } else {
            return apply_shift(cur, o);
          }
        },
        op);
  }
  return cur;
}

}  // namespace vessel
