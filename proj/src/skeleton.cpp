#include "vessel/skeleton.hpp"

#include <algorithm>
#include <cstdlib>
#include <vector>

namespace vessel {

namespace topology {

namespace {

constexpr int kCenter = 13;

struct Offset {
  int dx, dy, dz;
};

constexpr Offset offset_of(int i) { return {i % 3 - 1, (i / 3) % 3 - 1, i / 9 - 1}; }

constexpr int manhattan(const Offset& o) {
  return (o.dx < 0 ? -o.dx : o.dx) + (o.dy < 0 ? -o.dy : o.dy) + (o.dz < 0 ? -o.dz : o.dz);
}

struct AdjacencyTables {
  // 26-adjacency among the 26 neighbors, and 6-adjacency among the 18
  // neighbors (faces + edges). The center never appears.
  std::array<std::vector<int>, 27> adj26;
  std::array<std::vector<int>, 27> adj6_n18;
  std::array<bool, 27> in_n18{};
  std::array<bool, 27> is_face{};

  AdjacencyTables() {
    for (int i = 0; i < 27; ++i) {
      const auto o = offset_of(i);
      in_n18[i] = i != kCenter && manhattan(o) <= 2;
      is_face[i] = manhattan(o) == 1;
    }
    for (int i = 0; i < 27; ++i) {
      if (i == kCenter) continue;
      const auto a = offset_of(i);
      for (int j = 0; j < 27; ++j) {
        if (j == kCenter || j == i) continue;
        const auto b = offset_of(j);
        const Offset diff{a.dx - b.dx, a.dy - b.dy, a.dz - b.dz};
        const bool within1 = std::abs(diff.dx) <= 1 && std::abs(diff.dy) <= 1 &&
                             std::abs(diff.dz) <= 1;
        if (within1) adj26[i].push_back(j);
        if (in_n18[i] && in_n18[j] && manhattan(diff) == 1) adj6_n18[i].push_back(j);
      }
    }
  }
};

const AdjacencyTables& tables() {
  static const AdjacencyTables t;
  return t;
}

}  // namespace

int foreground_neighbor_count(const Neighborhood& n) {
  int c = 0;
  for (int i = 0; i < 27; ++i) c += (i != kCenter && n[i]) ? 1 : 0;
  return c;
}

bool is_simple(const Neighborhood& n) {
  const auto& t = tables();
  std::array<int, 27> stack{};
  std::array<bool, 27> seen{};

  // 26-components of the foreground in N26*.
  int fg_components = 0;
  for (int s = 0; s < 27; ++s) {
    if (s == kCenter || !n[s] || seen[s]) continue;
    if (++fg_components > 1) return false;
    int top = 0;
    stack[top++] = s;
    seen[s] = true;
    while (top > 0) {
      const int v = stack[--top];
      for (int w : t.adj26[v]) {
        if (n[w] && !seen[w]) {
          seen[w] = true;
          stack[top++] = w;
        }
      }
    }
  }
  if (fg_components != 1) return false;

  // 6-components of the background in N18* that touch a face neighbor.
  seen.fill(false);
  int bg_components = 0;
  for (int s = 0; s < 27; ++s) {
    if (!t.is_face[s] || n[s] || seen[s]) continue;
    if (++bg_components > 1) return false;
    int top = 0;
    stack[top++] = s;
    seen[s] = true;
    while (top > 0) {
      const int v = stack[--top];
      for (int w : t.adj6_n18[v]) {
        if (!n[w] && !seen[w]) {
          seen[w] = true;
          stack[top++] = w;
        }
      }
    }
  }
  return bg_components == 1;
}

}  // namespace topology

namespace {

// Working grid padded by one background voxel on every side so neighborhood
// reads never leave the buffer. Padded linear order preserves source order.
class PaddedGrid {
public:
  explicit PaddedGrid(const BinaryMask& m)
      : src_(m.dims()), px_(src_.nx + 2), py_(src_.ny + 2), pz_(src_.nz + 2),
        cells_(static_cast<std::size_t>(px_ * py_ * pz_), 0) {
    for (std::int64_t z = 0; z < src_.nz; ++z)
      for (std::int64_t y = 0; y < src_.ny; ++y)
        for (std::int64_t x = 0; x < src_.nx; ++x)
          if (m.at(x, y, z)) cells_[padded(x, y, z)] = 1;
    for (int i = 0; i < 27; ++i) {
      const std::int64_t dx = i % 3 - 1, dy = (i / 3) % 3 - 1, dz = i / 9 - 1;
      offsets_[i] = dx + px_ * (dy + py_ * dz);
    }
  }

  std::size_t padded(std::int64_t x, std::int64_t y, std::int64_t z) const {
    return static_cast<std::size_t>((x + 1) + px_ * ((y + 1) + py_ * (z + 1)));
  }

  std::vector<std::size_t> foreground() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < cells_.size(); ++i)
      if (cells_[i]) out.push_back(i);
    return out;
  }

  topology::Neighborhood neighborhood(std::size_t i) const {
    topology::Neighborhood n{};
    for (int k = 0; k < 27; ++k) n[k] = cells_[i + offsets_[k]] != 0;
    return n;
  }

  bool on(std::size_t i) const { return cells_[i] != 0; }
  void clear(std::size_t i) { cells_[i] = 0; }
  std::int64_t offset(int k) const { return offsets_[k]; }

  BinaryMask to_mask(const Spacing& spacing) const {
    std::vector<std::uint8_t> out(src_.size());
    for (std::int64_t z = 0; z < src_.nz; ++z)
      for (std::int64_t y = 0; y < src_.ny; ++y)
        for (std::int64_t x = 0; x < src_.nx; ++x)
          out[src_.index(x, y, z)] = cells_[padded(x, y, z)];
    return BinaryMask(src_, spacing, std::move(out));
  }

private:
  Dims src_;
  std::int64_t px_, py_, pz_;
  std::vector<std::uint8_t> cells_;
  std::array<std::int64_t, 27> offsets_{};
};

bool deletable(const PaddedGrid& g, std::size_t i) {
  const auto n = g.neighborhood(i);
  return topology::foreground_neighbor_count(n) != 1 && topology::is_simple(n);
}

}  // namespace

Skeleton skeletonize(const BinaryMask& m) {
  PaddedGrid grid(m);
  std::vector<std::size_t> alive = grid.foreground();
  const std::size_t source_count = alive.size();

  // Neighborhood slots of the six face directions, in subcycle order:
  // up (+z), down (-z), north (-y), south (+y), east (+x), west (-x).
  constexpr std::array<int, 6> kDirections{22, 4, 10, 16, 14, 12};

  std::vector<std::size_t> candidates;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int dir : kDirections) {
      const auto step = grid.offset(dir);
      candidates.clear();
      for (std::size_t i : alive) {
        if (grid.on(i) && !grid.on(i + step) && deletable(grid, i)) candidates.push_back(i);
      }
      for (std::size_t i : candidates) {
        if (deletable(grid, i)) {
          grid.clear(i);
          changed = true;
        }
      }
    }
    std::erase_if(alive, [&](std::size_t i) { return !grid.on(i); });
  }
  return {grid.to_mask(m.spacing()), source_count};
}

}  // namespace vessel
