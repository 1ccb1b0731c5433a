#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "vessel/morphology.hpp"

using namespace vessel;

namespace {

BinaryMask single(Dims d, std::int64_t x, std::int64_t y, std::int64_t z,
                  Spacing s = Spacing::isotropic()) {
  std::vector<std::uint8_t> v(d.size(), 0);
  v[d.index(x, y, z)] = 1;
  return BinaryMask(d, s, std::move(v));
}

}  // namespace

TEST_CASE("squared_edt examples") {
  const auto full = squared_edt(BinaryMask::full({4, 3, 2}), DistanceMetric::Physical);
  for (double v : full.values) CHECK(v == 0.0);

  const auto origin = single({6, 6, 3}, 0, 0, 0);
  CHECK(squared_edt(origin, DistanceMetric::VoxelIsotropic)[origin.dims().index(3, 4, 0)] == 25.0);

  const auto aniso = single({2, 2, 4}, 0, 0, 0, Spacing(1, 1, 2));
  CHECK(squared_edt(aniso, DistanceMetric::Physical)[aniso.dims().index(0, 0, 2)] == 16.0);
  CHECK(squared_edt(aniso, DistanceMetric::VoxelIsotropic)[aniso.dims().index(0, 0, 2)] == 4.0);

  const auto none = squared_edt(BinaryMask::empty({3, 3, 3}), DistanceMetric::VoxelIsotropic);
  for (double v : none.values) CHECK(std::isinf(v));
}

TEST_CASE("squared_edt equals the triple-loop oracle") {
  std::mt19937_64 rng(11);
  const Spacing spacings[] = {Spacing::isotropic(), Spacing(1, 1, 2), Spacing(0.7, 0.55, 2.5)};
  for (int trial = 0; trial < 12; ++trial) {
    const Spacing s = spacings[trial % 3];
    const auto m = oracle::random_mask(rng, {16, 16, 16}, trial % 2 ? 0.02 : 0.2, s);
    for (auto metric : {DistanceMetric::VoxelIsotropic, DistanceMetric::Physical}) {
      const auto fast = squared_edt(m, metric);
      const auto slow = oracle::brute_edt(m, metric);
      std::size_t mismatches = 0;
      for (std::size_t i = 0; i < slow.size(); ++i) mismatches += fast[i] != slow[i];
      CHECK(mismatches == 0);
    }
  }
}

TEST_CASE("distance field is 1-Lipschitz between face neighbors") {
  std::mt19937_64 rng(5);
  const Spacing s(0.8, 1.1, 2.0);
  const auto m = oracle::random_mask(rng, {12, 10, 8}, 0.03, s);
  const auto f = squared_edt(m, DistanceMetric::Physical);
  const Dims d = m.dims();
  for (std::int64_t z = 0; z < d.nz; ++z)
    for (std::int64_t y = 0; y < d.ny; ++y)
      for (std::int64_t x = 0; x + 1 < d.nx; ++x) {
        const double a = std::sqrt(f[d.index(x, y, z)]), b = std::sqrt(f[d.index(x + 1, y, z)]);
        CHECK(std::abs(a - b) <= s.dx() + 1e-12);
      }
}

TEST_CASE("dilate examples") {
  const auto c = single({7, 7, 7}, 3, 3, 3);
  CHECK(dilate(c, 0.0) == c);
  // Brute-force ball membership: offsets with |o|^2 <= 1 and <= 2.25.
  std::size_t r1 = 0, r15 = 0;
  for (int dz = -3; dz <= 3; ++dz)
    for (int dy = -3; dy <= 3; ++dy)
      for (int dx = -3; dx <= 3; ++dx) {
        const int n2 = dx * dx + dy * dy + dz * dz;
        r1 += n2 <= 1;
        r15 += n2 * 4 <= 9;
      }
  REQUIRE(r1 == 7);
  REQUIRE(r15 == 19);
  CHECK(dilate(c, 1.0).count() == r1);
  CHECK(dilate(c, 1.5).count() == r15);
  CHECK(dilate(c, 1.5) == oracle::brute_dilate(c, 1.5, DistanceMetric::VoxelIsotropic));

  try {
    dilate(c, -1.0);
    FAIL("expected NegativeRadius");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeRadius);
  }
}

TEST_CASE("dilation is extensive and monotone; empty stays empty") {
  std::mt19937_64 rng(3);
  const auto m = oracle::random_blobs(rng, {20, 20, 20}, 3, 3.0, Spacing(1, 1, 2));
  BinaryMask prev = m;
  for (double r : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.5}) {
    for (auto metric : {DistanceMetric::VoxelIsotropic, DistanceMetric::Physical}) {
      CHECK(oracle::is_subset(m, dilate(m, r, metric)));
    }
    const auto cur = dilate(m, r);
    CHECK(oracle::is_subset(prev, cur));
    prev = cur;
  }
  CHECK(dilate(BinaryMask::empty({5, 5, 5}), 3.0).count() == 0);
}

TEST_CASE("erode is the dual of dilate") {
  std::mt19937_64 rng(9);
  const auto m = oracle::random_blobs(rng, {18, 18, 18}, 4, 5.0);
  const auto full = BinaryMask::full(m.dims());
  for (double r : {1.0, 1.5, 2.0}) {
    const auto complement = boolean_op(full, m, BoolOp::Minus);
    const auto expected = boolean_op(full, dilate(complement, r), BoolOp::Minus);
    if (complement.count() > 0) CHECK(erode(m, r) == expected);
    CHECK(oracle::is_subset(erode(m, r), m));
  }
  CHECK(erode(full, 2.0) == full);
}

TEST_CASE("boundary examples") {
  const auto one = single({5, 5, 5}, 2, 2, 2);
  CHECK(boundary(one) == one);

  std::vector<std::uint8_t> cube(125, 0);
  const Dims d{5, 5, 5};
  for (int z = 1; z <= 3; ++z)
    for (int y = 1; y <= 3; ++y)
      for (int x = 1; x <= 3; ++x) cube[d.index(x, y, z)] = 1;
  const BinaryMask cm(d, Spacing::isotropic(), cube);
  CHECK(boundary(cm).count() == 26);
  CHECK(!boundary(cm).at(2, 2, 2));

  const auto line = BinaryMask::full({1, 1, 9});
  CHECK(boundary(line).count() == 9);

  // Full volume: exactly the six faces of the box.
  const auto full = BinaryMask::full({4, 5, 6});
  CHECK(boundary(full).count() == 4 * 5 * 6 - 2 * 3 * 4);

  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const auto m = oracle::random_mask(rng, {9, 8, 7}, 0.5);
    const auto b = boundary(m);
    CHECK(b == oracle::brute_boundary(m));
    CHECK(oracle::is_subset(b, m));
  }
}

TEST_CASE("connected_components examples") {
  const auto one = single({3, 3, 3}, 1, 1, 1);
  const auto cc = connected_components(one);
  CHECK(cc.component_count() == 1);
  CHECK(cc.sizes[0] == 1);

  std::vector<std::uint8_t> diag(8, 0);
  diag[0] = 1;
  diag[7] = 1;  // (1,1,1) in a 2x2x2 grid
  const BinaryMask dm({2, 2, 2}, Spacing::isotropic(), diag);
  CHECK(connected_components(dm, Connectivity::Full26).component_count() == 1);
  CHECK(connected_components(dm, Connectivity::Face6).component_count() == 2);
}

TEST_CASE("connected_components matches the flood-fill oracle") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const double density = 0.1 + 0.05 * (trial % 8);
    const auto m = oracle::random_mask(rng, {16, 16, 16}, density);
    for (int conn : {6, 26}) {
      const auto cc = connected_components(m, conn == 6 ? Connectivity::Face6 : Connectivity::Full26);
      const auto expect = oracle::flood_fill_labels(m, conn);
      CHECK(cc.ids == expect);
      std::size_t total = 0;
      for (auto s : cc.sizes) {
        CHECK(s >= 1);
        total += s;
      }
      CHECK(total == m.count());
    }
  }
}
