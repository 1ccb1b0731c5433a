#include "vessel/metrics.hpp"

#include <cmath>
#include <optional>

namespace vessel {

namespace {

// Returns the convention value when either mask is empty.
std::optional<double> empty_convention(const BinaryMask& a, const BinaryMask& b) {
  const bool ea = a.is_empty();
  const bool eb = b.is_empty();
  if (ea && eb) return 1.0;
  if (ea || eb) return 0.0;
  return std::nullopt;
}

double ratio(std::size_t num, std::size_t den) {
  return static_cast<double>(num) / static_cast<double>(den);
}

void require_radius(double r) {
  if (!(r >= 0.0)) throw Error(ErrorCode::NegativeRadius, "radius " + std::to_string(r) + " < 0");
}

}  // namespace

NsdConfig::NsdConfig(double tau) : tau_mm(tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::BadSpacing, "NSD tolerance must be > 0, got " + std::to_string(tau));
  }
}

GeometricConfig::GeometricConfig(double a, double b, DistanceMetric m)
    : alpha(a), beta(b), metric(m) {
  require_radius(a);
  require_radius(b);
}

double iou(const BinaryMask& a, const BinaryMask& b) {
  require_same_grid(a, b);
  if (auto c = empty_convention(a, b)) return *c;
  const auto va = a.voxels();
  const auto vb = b.voxels();
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    inter += va[i] & vb[i];
    uni += va[i] | vb[i];
  }
  return ratio(inter, uni);
}

double dsc(const BinaryMask& a, const BinaryMask& b) {
  require_same_grid(a, b);
  if (auto c = empty_convention(a, b)) return *c;
  const auto va = a.voxels();
  const auto vb = b.voxels();
  std::size_t inter = 0, total = 0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    inter += va[i] & vb[i];
    total += va[i] + vb[i];
  }
  return ratio(2 * inter, total);
}

ClDiceBreakdown cldice(const BinaryMask& pred, const BinaryMask& ref,
                       const BinaryMask& pred_skeleton, const BinaryMask& ref_skeleton,
                       ClDiceMode mode) {
  require_same_grid(pred, ref);
  if (auto c = empty_convention(pred, ref)) return {*c, *c, *c};

  const auto sp = pred_skeleton.voxels();
  const auto sr = ref_skeleton.voxels();
  const auto against_pred = mode == ClDiceMode::SkeletonVsMask ? pred.voxels() : sp;
  const auto against_ref = mode == ClDiceMode::SkeletonVsMask ? ref.voxels() : sr;

  std::size_t sp_hit = 0, sp_total = 0, sr_hit = 0, sr_total = 0;
  for (std::size_t i = 0; i < sp.size(); ++i) {
    sp_total += sp[i];
    sp_hit += sp[i] & against_ref[i];
    sr_total += sr[i];
    sr_hit += sr[i] & against_pred[i];
  }
  ClDiceBreakdown out;
  out.t_prec = sp_total ? ratio(sp_hit, sp_total) : 0.0;
  out.t_sens = sr_total ? ratio(sr_hit, sr_total) : 0.0;
  const double sum = out.t_prec + out.t_sens;
  out.cldice = sum > 0.0 ? 2.0 * out.t_prec * out.t_sens / sum : 0.0;
  return out;
}

ClDiceBreakdown cldice(const BinaryMask& pred, const BinaryMask& ref, ClDiceMode mode) {
  require_same_grid(pred, ref);
  if (auto c = empty_convention(pred, ref)) return {*c, *c, *c};
  return cldice(pred, ref, skeletonize(pred).mask, skeletonize(ref).mask, mode);
}

double nsd(const BinaryMask& a, const BinaryMask& b, const NsdConfig& cfg) {
  require_same_grid(a, b);
  if (auto c = empty_convention(a, b)) return *c;
  const auto surf_a = boundary(a);
  const auto surf_b = boundary(b);
  const auto dist_a = squared_edt(surf_a, DistanceMetric::Physical);
  const auto dist_b = squared_edt(surf_b, DistanceMetric::Physical);
  const double tau2 = cfg.tau_mm * cfg.tau_mm;

  const auto va = surf_a.voxels();
  const auto vb = surf_b.voxels();
  std::size_t hits = 0, total = 0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    if (vb[i]) {
      ++total;
      hits += dist_a[i] <= tau2;
    }
    if (va[i]) {
      ++total;
      hits += dist_b[i] <= tau2;
    }
  }
  return ratio(hits, total);
}

PairGeometry::PairGeometry(const BinaryMask& pred, const BinaryMask& ref, DistanceMetric metric)
    : pred_(pred), ref_(ref), pred_edt_(squared_edt(pred, metric)),
      ref_edt_(squared_edt(ref, metric)), pred_skel_(skeletonize(pred).mask),
      ref_skel_(skeletonize(ref).mask) {
  require_same_grid(pred, ref);
}

double PairGeometry::area(double alpha) const {
  require_radius(alpha);
  if (auto c = empty_convention(pred_, ref_)) return *c;
  const double a2 = alpha * alpha;
  const auto p = pred_.voxels();
  const auto r = ref_.voxels();
  std::size_t num = 0, den = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    den += p[i] | r[i];
    num += (r[i] && pred_edt_[i] <= a2) || (p[i] && ref_edt_[i] <= a2);
  }
  return ratio(num, den);
}

double PairGeometry::length(double beta) const {
  require_radius(beta);
  if (auto c = empty_convention(pred_, ref_)) return *c;
  const double b2 = beta * beta;
  const auto sp = pred_skel_.voxels();
  const auto sr = ref_skel_.voxels();
  std::size_t num = 0, den = 0;
  for (std::size_t i = 0; i < sp.size(); ++i) {
    den += sp[i] | sr[i];
    num += (sp[i] && ref_edt_[i] <= b2) || (sr[i] && pred_edt_[i] <= b2);
  }
  return ratio(num, den);
}

ClDiceBreakdown PairGeometry::cldice(ClDiceMode mode) const {
  return vessel::cldice(pred_, ref_, pred_skel_, ref_skel_, mode);
}

double area_measure(const BinaryMask& pred, const BinaryMask& ref, double alpha,
                    DistanceMetric metric) {
  require_same_grid(pred, ref);
  require_radius(alpha);
  if (auto c = empty_convention(pred, ref)) return *c;
  const auto dp = squared_edt(pred, metric);
  const auto dr = squared_edt(ref, metric);
  const double a2 = alpha * alpha;
  const auto p = pred.voxels();
  const auto r = ref.voxels();
  std::size_t num = 0, den = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    den += p[i] | r[i];
    num += (r[i] && dp[i] <= a2) || (p[i] && dr[i] <= a2);
  }
  return ratio(num, den);
}

double length_measure(const BinaryMask& pred, const BinaryMask& ref, double beta,
                      DistanceMetric metric) {
  require_same_grid(pred, ref);
  require_radius(beta);
  if (auto c = empty_convention(pred, ref)) return *c;
  return PairGeometry(pred, ref, metric).length(beta);
}

}  // namespace vessel
