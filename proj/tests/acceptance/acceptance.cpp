// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nifti_fixture.hpp"
#include "oracles.hpp"
#include "leaderboard_means.hpp"
#include "vessel/challenge.hpp"
#include "vessel/error.hpp"
#include "vessel/io.hpp"
#include "vessel/metrics.hpp"
#include "vessel/phantom.hpp"
#include "vessel/postprocess.hpp"
#include "vessel/skeleton.hpp"

using namespace vessel;

namespace {

struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
    if (!ok) ++failed;
  }
  std::size_t failed = 0;
};

using Clock = std::chrono::steady_clock;

int run_criterion(const char* id, const char* title, double limit_s,
                  const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit_s > 0 && secs >= limit_s) {
    std::ostringstream os;
    os << "runtime " << secs << " s exceeds " << limit_s << " s";
    c.expect(false, os.str());
  }
  std::printf("%s %s %s (%.2f s)\n", c.failed ? "FAIL" : "PASS", id, title, secs);
  for (const auto& f : c.failures) std::printf("    %s\n", f.c_str());
  std::fflush(stdout);
  return c.failed ? 1 : 0;
}

std::string str(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void ac1(Check& c) {
  const auto b1 = rank_task1(tables::task1());
  const char* order[] = {"GLIMS", "MedInsight-ViseurAI", "UW-Madison-AIR", "Haqan"};
  c.expect(b1.entries.size() == 4, "task 1 needs four entries");
  for (std::size_t i = 0; i < 4 && i < b1.entries.size(); ++i) {
    c.expect(b1.entries[i].team == order[i], "task 1 position " + std::to_string(i + 1) + " is " +
                                                 b1.entries[i].team);
  }
  c.expect(std::abs(b1.entries[0].score - 0.697) <= 0.001, "GLIMS score " + str(b1.entries[0].score));

  const auto b2 = rank_task2(tables::task2());
  for (const auto& e : b2.entries) {
    if (e.team == "UW-Madison-AIR") {
      c.expect(std::abs(e.score - 0.623) <= 0.001, "UW-Madison-AIR task 2 score " + str(e.score));
    }
    if (e.team == "Haqan") {
      c.expect(std::abs(e.score - 0.543) <= 0.001, "Haqan task 2 score " + str(e.score));
    }
  }
}

std::vector<BinaryMask> identity_phantoms() {
  std::vector<BinaryMask> out;
  const Dims d{64, 64, 64};
  for (int i = 0; i < 10; ++i) {
    const double r = 1.0 + 0.4 * i;
    const double x0 = 20 + i, y0 = 40 - i;
    out.push_back(gen_capsule(Polyline({{x0, y0, 6}, {44 - i * 0.5, 24 + i * 1.5, 57}}), r, d));
  }
  for (int i = 0; i < 15; ++i) {
    TreeSpec spec;
    spec.seed = 1000 + static_cast<std::uint64_t>(i);
    spec.depth = 1 + i % 4;
    out.push_back(gen_tree(spec, d).mask);
  }
  return out;
}

void ac2(Check& c) {
  const EvalConfig cfg;
  const auto ms = identity_phantoms();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto r = evaluate_case(ms[i], ms[i], cfg);
    std::vector<double> vals{r.cldice.cldice, r.dsc, r.iou, r.nsd, r.area, r.length};
    for (const auto& [d, v] : r.area_curve) vals.push_back(v);
    for (const auto& [d, v] : r.length_curve) vals.push_back(v);
    c.expect(r.area_curve.size() == cfg.deltas.size(), "missing sweep values");
    for (double v : vals) c.expect(std::abs(v - 1.0) <= 1e-12, "phantom " + std::to_string(i) + " value " + str(v));
  }
}

void ac3(Check& c) {
  std::mt19937_64 rng(20240301);
  std::uniform_real_distribution<double> dens(0.005, 0.05);
  for (int t = 0; t < 50; ++t) {
    const auto m = oracle::random_mask(rng, {16, 16, 16}, dens(rng), Spacing(1, 1, 2));
    for (double r : {1.0, 1.5, 2.0, 3.0}) {
      for (auto metric : {DistanceMetric::VoxelIsotropic, DistanceMetric::Physical}) {
        c.expect(dilate(m, r, metric) == oracle::brute_dilate(m, r, metric),
                 "mask " + std::to_string(t) + " radius " + str(r));
      }
    }
  }
}

void ac4(Check& c) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> sp(0.5, 2.5);
  for (int t = 0; t < 25; ++t) {
    const Spacing s(sp(rng), sp(rng), sp(rng));
    const auto a = oracle::random_blobs(rng, {24, 24, 24}, 6, 6.0, s);
    const auto b = oracle::random_blobs(rng, {24, 24, 24}, 6, 6.0, s);
    for (double tau : {0.5, 1.0, 2.0}) {
      const double got = nsd(a, b, NsdConfig(tau)), want = oracle::brute_nsd(a, b, tau);
      c.expect(std::abs(got - want) <= 1e-9,
               "pair " + std::to_string(t) + " tau " + str(tau) + ": " + str(got) + " vs " + str(want));
    }
  }
}

void ac5(Check& c) {
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> dens(0.05, 0.6);
  for (int t = 0; t < 100; ++t) {
    const auto a = oracle::random_mask(rng, {32, 32, 32}, dens(rng));
    const auto b = oracle::random_mask(rng, {32, 32, 32}, dens(rng));
    const double i = iou(a, b);
    c.expect(area_measure(a, b, 0.0) == i, "pair " + std::to_string(t) + " Area(0) != IoU");
    c.expect(std::abs(dsc(a, b) - 2 * i / (1 + i)) <= 1e-12, "pair " + std::to_string(t) + " DSC");
  }
}

void ac6(Check& c) {
  EvalConfig cfg;
  cfg.deltas = {1, 3, 5, 7, 10};
  for (int t = 0; t < 20; ++t) {
    TreeSpec spec;
    spec.seed = 500 + static_cast<std::uint64_t>(t);
    const auto ref = gen_tree(spec, {64, 64, 64}).mask;
    std::vector<DegradeOp> ops;
    switch (t % 4) {
      case 0: ops = {degrade_ops::Break{2, 20, 4}}; break;
      case 1: ops = {degrade_ops::Thin{1.0}, degrade_ops::Shift{1, 1, 0}}; break;
      case 2: ops = {degrade_ops::Thicken{2.0}, degrade_ops::Break{2, 30, 3}}; break;
      default: ops = {degrade_ops::Shift{2, -1, 1}, degrade_ops::Break{0, 32, 2}}; break;
    }
    const auto pred = degrade(ref, ops);
    const PairGeometry geo(pred, ref);
    double pa = -1, pl = -1;
    for (double d : cfg.deltas) {
      const double a = geo.area(d), l = geo.length(d);
      c.expect(a >= pa && l >= pl, "pair " + std::to_string(t) + " decreases at delta " + str(d));
      pa = a;
      pl = l;
    }
  }
}

// Lattice points (i, j) with i^2 + j^2 <= r^2.
std::size_t disk_points(int r) {
  std::size_t n = 0;
  for (int i = -r; i <= r; ++i)
    for (int j = -r; j <= r; ++j) n += i * i + j * j <= r * r;
  return n;
}

void ac7(Check& c) {
  const Dims d{32, 32, 48};
  const Point3 a{16, 16, 9}, b{16, 16, 38};  // 30 voxels
  const auto thin = gen_cylinder(a, b, 1.0, d);
  const auto thick = gen_cylinder(a, b, 3.0, d);
  const std::size_t n1 = disk_points(1) * 30, n3 = disk_points(3) * 30;
  c.expect(thin.count() == n1, "radius-1 tube count " + std::to_string(thin.count()));
  c.expect(thick.count() == n3, "radius-3 tube count " + std::to_string(thick.count()));
  const double i = iou(thin, thick);
  c.expect(i == double(n1) / double(n3), "iou " + str(i) + " vs analytic");
  c.expect(i <= 0.25, "iou " + str(i));
  const double cl = cldice(thin, thick).cldice;
  c.expect(cl >= 0.9, "cldice " + str(cl));
}

BinaryMask random_phantom(std::uint64_t k) {
  const Dims d{64, 64, 64};
  SplitMix64 g(k * 7919 + 1);
  if (k % 3 == 0) {
    std::vector<Point3> pts;
    const int n = 2 + static_cast<int>(g.next() % 4);
    for (int i = 0; i < n; ++i) pts.push_back({g.uniform(6, 58), g.uniform(6, 58), g.uniform(6, 58)});
    return gen_capsule(Polyline(pts), g.uniform(0.5, 4.5), d);
  }
  TreeSpec spec;
  spec.seed = k;
  spec.depth = 1 + static_cast<int>(k % 4);
  spec.root_radius = g.uniform(1.5, 4.0);
  spec.decay = g.uniform(0.6, 1.0);
  auto m = gen_tree(spec, d).mask;
  if (k % 3 == 2) m = degrade(m, {degrade_ops::Break{static_cast<int>(k % 3), 24, 2}});
  return m;
}

void ac8(Check& c) {
  for (std::uint64_t k = 0; k < 200; ++k) {
    const auto m = random_phantom(k);
    const auto s = skeletonize(m).mask;
    const std::string tag = "phantom " + std::to_string(k);
    c.expect(oracle::is_subset(s, m), tag + " skeleton not a subset");
    c.expect(oracle::component_count(s) == oracle::component_count(m), tag + " component count");
    c.expect(skeletonize(s).mask == s, tag + " not idempotent");
    c.expect(oracle::is_thin(s), tag + " has a full 2x2x2 block");
  }
}

template <typename Fn>
bool raises(ErrorCode code, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

void ac9(Check& c) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dim(1, 64), lab(0, 2);
  for (int t = 0; t < 20; ++t) {
    const Dims d{dim(rng), dim(rng), t < 4 ? 64 : dim(rng) % 20 + 1};
    std::vector<std::uint8_t> v(d.size());
    for (auto& x : v) x = static_cast<std::uint8_t>(lab(rng));
    // Literal spacings: float32 pixdim then reproduces them exactly.
    const double xy[] = {0.54, 0.55, 0.6, 0.62, 0.7, 0.75, 0.79, 0.8};
    const LabelVolume vol(d, Spacing(xy[t % 8], 0.79, t % 2 ? 3.2 : 2.0), v);
    const std::string tag = "volume " + std::to_string(t);

    const auto nii = io::write_nifti(vol);
    const auto back = io::read_nifti(nii).volume;
    c.expect(back == vol && back.spacing() == vol.spacing(), tag + " nifti");
    c.expect(io::read_nifti(io::gzip_compress(nii)).volume == vol, tag + " nifti.gz");
    const auto rc = io::write_raw_container(vol);
    c.expect(io::read_raw_container(rc.sidecar, rc.body) == vol, tag + " raw container");

    fixture::NiftiSpec spec;
    spec.dims = {static_cast<std::int16_t>(d.nx), static_cast<std::int16_t>(d.ny),
                 static_cast<std::int16_t>(d.nz)};
    spec.pixdim = {static_cast<float>(vol.spacing().dx()), 0.79f, t % 2 ? 3.2f : 2.0f};
    spec.datatype = t % 2 ? 4 : 2;
    spec.big_endian = true;
    const auto swapped = io::read_nifti(fixture::make_nifti(spec, {v.begin(), v.end()}));
    c.expect(swapped.header.endianness == io::Endianness::Big, tag + " endianness");
    c.expect(swapped.volume == vol, tag + " byte-swapped fixture");
  }

  fixture::NiftiSpec spec;
  spec.dims = {2, 2, 2};
  const std::vector<double> ones(8, 1.0);
  auto magic = spec;
  magic.magic = "abc";
  c.expect(raises(ErrorCode::BadMagic, [&] { io::read_nifti(fixture::make_nifti(magic, ones)); }),
           "bad magic");
  auto dt = spec;
  dt.datatype = 64;
  c.expect(raises(ErrorCode::UnsupportedDatatype, [&] { io::read_nifti(fixture::make_nifti(dt, ones)); }),
           "unsupported datatype");
  auto cut = fixture::make_nifti(spec, ones);
  cut.resize(cut.size() - 3);
  c.expect(raises(ErrorCode::TruncatedData, [&] { io::read_nifti(cut); }), "truncated data");
  c.expect(raises(ErrorCode::LabelRange,
                  [&] { io::read_nifti(fixture::make_nifti(spec, std::vector<double>(8, 4.0))); }),
           "label range");
  const LabelVolume small({2, 2, 2}, Spacing::isotropic(), std::vector<std::uint8_t>(8, 1));
  const auto rc = io::write_raw_container(small);
  c.expect(raises(ErrorCode::SchemaError, [&] { io::read_raw_container("{\"dims\": [2,2,2]}", rc.body); }),
           "sidecar schema");
  c.expect(raises(ErrorCode::LengthMismatch,
                  [&] { io::read_raw_container(rc.sidecar, io::ByteView(rc.body).first(7)); }),
           "short body");
}

LabelVolume oracle_keep_largest(const LabelVolume& v) {
  std::vector<std::uint8_t> out(v.size(), 0);
  for (auto cls : {VesselClass::Hepatic, VesselClass::Portal}) {
    const auto labels = oracle::flood_fill_labels(v.class_mask(cls), 26);
    std::vector<std::size_t> size(1, 0);
    for (auto l : labels) {
      if (l >= size.size()) size.resize(l + 1, 0);
      if (l) ++size[l];
    }
    std::uint32_t best = 0;
    for (std::uint32_t l = 1; l < size.size(); ++l)
      if (!best || size[l] > size[best]) best = l;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (best && labels[i] == best) out[i] = static_cast<std::uint8_t>(cls);
  }
  return LabelVolume(v.dims(), v.spacing(), std::move(out));
}

void ac10(Check& c) {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<int> lab(1, 2);
  for (int t = 0; t < 50; ++t) {
    const auto m = oracle::random_blobs(rng, {20, 20, 20}, 8, 3.0);
    std::vector<std::uint8_t> v(m.size(), 0);
    // Each blob-ish region gets a random class; salt adds small extra components.
    const auto cc = connected_components(m);
    std::vector<std::uint8_t> cls(cc.component_count() + 1);
    for (auto& x : cls) x = static_cast<std::uint8_t>(lab(rng));
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) v[i] = cls[cc.ids[i]];
    std::bernoulli_distribution salt(0.003);
    for (auto& x : v)
      if (!x && salt(rng)) x = static_cast<std::uint8_t>(lab(rng));
    const LabelVolume vol(m.dims(), m.spacing(), v);
    c.expect(keep_largest_per_class(vol) == oracle_keep_largest(vol),
             "volume " + std::to_string(t) + " largest component");

    const auto liver = oracle::random_mask(rng, m.dims(), 0.5);
    c.expect(apply_liver_mask(m, liver) == boolean_op(m, liver, BoolOp::And),
             "volume " + std::to_string(t) + " liver gating");
  }
}

}  // namespace

int main() {
  int failed = 0;
  failed += run_criterion("AC1", "ranking reproduction", 1.0, ac1);
  failed += run_criterion("AC2", "identity suite", 30.0, ac2);
  failed += run_criterion("AC3", "dilation oracle equivalence", 0, ac3);
  failed += run_criterion("AC4", "NSD oracle equivalence", 0, ac4);
  failed += run_criterion("AC5", "Area(0) == IoU and DSC/IoU relation", 0, ac5);
  failed += run_criterion("AC6", "Area/Length monotone in delta", 0, ac6);
  failed += run_criterion("AC7", "clDice thickness contrast", 0, ac7);
  failed += run_criterion("AC8", "skeleton invariants", 120.0, ac8);
  failed += run_criterion("AC9", "IO round-trips and malformed inputs", 0, ac9);
  failed += run_criterion("AC10", "post-processing", 0, ac10);
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
