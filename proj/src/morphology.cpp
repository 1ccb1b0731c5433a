#include "vessel/morphology.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>

namespace vessel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One-dimensional squared distance transform of a sampled function f under
// the weighted parabola family f(q) + (w (p - q))^2. Infinite samples never
// enter the lower envelope.
class EnvelopePass {
public:
  void run(std::vector<double>& f, double w) {
    const std::size_t n = f.size();
    vertices_.resize(n);
    bounds_.resize(n + 1);
    out_.resize(n);

    const double w2 = w * w;
    std::ptrdiff_t k = -1;
    for (std::size_t q = 0; q < n; ++q) {
      if (f[q] == kInf) continue;
      if (k < 0) {
        k = 0;
        vertices_[0] = q;
        bounds_[0] = -kInf;
        bounds_[1] = kInf;
        continue;
      }
      double s = 0.0;
      while (true) {
        const std::size_t v = vertices_[k];
        const double qd = static_cast<double>(q);
        const double vd = static_cast<double>(v);
        s = ((f[q] + w2 * qd * qd) - (f[v] + w2 * vd * vd)) / (2.0 * w2 * (qd - vd));
        if (s <= bounds_[k] && k > 0) {
          --k;
        } else {
          break;
        }
      }
      ++k;
      vertices_[k] = q;
      bounds_[k] = s;
      bounds_[k + 1] = kInf;
    }
    if (k < 0) return;  // all infinite; leave as is

    std::ptrdiff_t j = 0;
    for (std::size_t p = 0; p < n; ++p) {
      const double pd = static_cast<double>(p);
      while (bounds_[j + 1] < pd) ++j;
      const std::size_t v = vertices_[j];
      const double d = w * (pd - static_cast<double>(v));
      out_[p] = f[v] + d * d;
    }
    std::copy(out_.begin(), out_.end(), f.begin());
  }

private:
  std::vector<std::size_t> vertices_;
  std::vector<double> bounds_;
  std::vector<double> out_;
};

}  // namespace

DistanceField squared_edt(const BinaryMask& m, DistanceMetric metric) {
  const Dims d = m.dims();
  DistanceField field{d, m.spacing(), std::vector<double>(d.size())};
  const auto vox = m.voxels();
  for (std::size_t i = 0; i < vox.size(); ++i) field.values[i] = vox[i] ? 0.0 : kInf;

  const std::array<std::int64_t, 3> extent{d.nx, d.ny, d.nz};
  const std::array<std::int64_t, 3> stride{1, d.nx, d.nx * d.ny};

  EnvelopePass pass;
  std::vector<double> line;
  for (int axis = 0; axis < 3; ++axis) {
    const double w = metric == DistanceMetric::Physical ? m.spacing()[axis] : 1.0;
    const std::int64_t n = extent[axis];
    const std::int64_t step = stride[axis];
    line.resize(static_cast<std::size_t>(n));
    // Iterate over every line parallel to `axis` by walking its start voxels.
    for (std::size_t start = 0; start < d.size(); ++start) {
      const auto c = d.coords(start);
      if (c[axis] != 0) continue;
      for (std::int64_t t = 0; t < n; ++t) line[t] = field.values[start + t * step];
      pass.run(line, w);
      for (std::int64_t t = 0; t < n; ++t) field.values[start + t * step] = line[t];
    }
  }
  return field;
}

BinaryMask threshold(const DistanceField& field, double radius) {
  if (radius < 0.0) {
    throw Error(ErrorCode::NegativeRadius, "radius " + std::to_string(radius) + " < 0");
  }
  const double r2 = radius * radius;
  std::vector<std::uint8_t> out(field.values.size());
  std::transform(field.values.begin(), field.values.end(), out.begin(),
                 [r2](double v) { return static_cast<std::uint8_t>(v <= r2); });
  return BinaryMask(field.dims, field.spacing, std::move(out));
}

BinaryMask dilate(const BinaryMask& m, double radius, DistanceMetric metric) {
  if (radius < 0.0) {
    throw Error(ErrorCode::NegativeRadius, "radius " + std::to_string(radius) + " < 0");
  }
  if (radius == 0.0) return m;
  return threshold(squared_edt(m, metric), radius);
}

BinaryMask erode(const BinaryMask& m, double radius, DistanceMetric metric) {
  if (radius < 0.0) {
    throw Error(ErrorCode::NegativeRadius, "radius " + std::to_string(radius) + " < 0");
  }
  const auto complement = boolean_op(BinaryMask::full(m.dims(), m.spacing()), m, BoolOp::Minus);
  const auto field = squared_edt(complement, metric);
  const double r2 = radius * radius;
  const auto vox = m.voxels();
  std::vector<std::uint8_t> out(vox.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = vox[i] && field.values[i] > r2;
  return BinaryMask(m.dims(), m.spacing(), std::move(out));
}

BinaryMask boundary(const BinaryMask& m) {
  const Dims d = m.dims();
  std::vector<std::uint8_t> out(d.size(), 0);
  for (std::int64_t z = 0; z < d.nz; ++z) {
    for (std::int64_t y = 0; y < d.ny; ++y) {
      for (std::int64_t x = 0; x < d.nx; ++x) {
        if (!m.at(x, y, z)) continue;
        const bool on_border = x == 0 || y == 0 || z == 0 || x == d.nx - 1 ||
                               y == d.ny - 1 || z == d.nz - 1;
        const bool exposed = on_border || !m.at(x - 1, y, z) || !m.at(x + 1, y, z) ||
                             !m.at(x, y - 1, z) || !m.at(x, y + 1, z) ||
                             !m.at(x, y, z - 1) || !m.at(x, y, z + 1);
        if (exposed) out[d.index(x, y, z)] = 1;
      }
    }
  }
  return BinaryMask(d, m.spacing(), std::move(out));
}

namespace {

struct DisjointSets {
  std::vector<std::uint32_t> parent;

  std::uint32_t make() {
    parent.push_back(static_cast<std::uint32_t>(parent.size()));
    return parent.back();
  }
  std::uint32_t find(std::uint32_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Keep the older provisional label as root.
    if (b < a) std::swap(a, b);
    parent[b] = a;
  }
};

}  // namespace

ComponentLabeling connected_components(const BinaryMask& m, Connectivity connectivity) {
  const Dims d = m.dims();
  // Neighbors already visited in a raster scan (strictly smaller linear index).
  std::vector<std::array<int, 3>> back;
  for (int dz = -1; dz <= 0; ++dz) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dz == 0 && (dy > 0 || (dy == 0 && dx >= 0))) continue;
        const int manhattan = std::abs(dx) + std::abs(dy) + std::abs(dz);
        if (connectivity == Connectivity::Face6 && manhattan != 1) continue;
        back.push_back({dx, dy, dz});
      }
    }
  }

  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> provisional(d.size(), kNone);
  DisjointSets sets;
  for (std::int64_t z = 0; z < d.nz; ++z) {
    for (std::int64_t y = 0; y < d.ny; ++y) {
      for (std::int64_t x = 0; x < d.nx; ++x) {
        const std::size_t i = d.index(x, y, z);
        if (!m[i]) continue;
        std::uint32_t label = kNone;
        for (const auto& o : back) {
          const auto nx = x + o[0], ny = y + o[1], nz = z + o[2];
          if (!d.contains(nx, ny, nz)) continue;
          const auto nl = provisional[d.index(nx, ny, nz)];
          if (nl == kNone) continue;
          if (label == kNone) {
            label = nl;
          } else {
            sets.unite(label, nl);
          }
        }
        provisional[i] = label == kNone ? sets.make() : label;
      }
    }
  }

  ComponentLabeling out{d, std::vector<std::uint32_t>(d.size(), 0), {}};
  std::vector<std::uint32_t> final_id(sets.parent.size(), 0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (provisional[i] == kNone) continue;
    const auto root = sets.find(provisional[i]);
    if (final_id[root] == 0) {
      out.sizes.push_back(0);
      final_id[root] = static_cast<std::uint32_t>(out.sizes.size());
    }
    out.ids[i] = final_id[root];
    ++out.sizes[final_id[root] - 1];
  }
  return out;
}

}  // namespace vessel
