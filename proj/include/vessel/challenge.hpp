#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vessel/io.hpp"
#include "vessel/metrics.hpp"
#include "vessel/volume.hpp"

namespace vessel {

namespace metric_name {
inline constexpr const char* kClDice = "clDice";
inline constexpr const char* kDsc = "DSC";
inline constexpr const char* kIou = "IoU";
inline constexpr const char* kNsd = "NSD";
inline constexpr const char* kArea = "Area";
inline constexpr const char* kLength = "Length";
}  // namespace metric_name

struct EvalConfig {
  NsdConfig nsd{};
  GeometricConfig geometric{};
  std::vector<double> deltas{1.0, 3.0, 5.0, 7.0, 10.0};
  ClDiceMode cldice_mode = ClDiceMode::SkeletonVsMask;

  /// Throws SpecInvalid unless deltas are non-negative and strictly increasing.
  void validate() const;
};

struct MetricReport {
  std::string case_id;
  ClDiceBreakdown cldice;
  double dsc = 0.0;
  double iou = 0.0;
  double nsd = 0.0;
  double area = 0.0;    // at geometric.alpha
  double length = 0.0;  // at geometric.beta
  std::map<double, double> area_curve;
  std::map<double, double> length_curve;

  io::ReportRecord to_record() const;
};

MetricReport evaluate_case(const BinaryMask& pred, const BinaryMask& ref, const EvalConfig& cfg,
                           std::string case_id = {});

/// A reference case with no submitted prediction scores zero everywhere.
MetricReport missing_case_report(std::string case_id, const EvalConfig& cfg);

struct MulticlassReport {
  MetricReport hepatic;
  MetricReport portal;
};

MulticlassReport evaluate_multiclass(const LabelVolume& pred, const LabelVolume& ref,
                                     const EvalConfig& cfg, std::string case_id = {});

struct SweepPoint {
  double delta = 0.0;
  double area = 0.0;
  double length = 0.0;
};

/// Area and Length at every configured delta; nondecreasing in delta.
std::vector<SweepPoint> dilation_sweep(const BinaryMask& pred, const BinaryMask& ref,
                                       const EvalConfig& cfg);

// ---------------------------------------------------------------------------
// Aggregation and ranking

struct MetricStat {
  double mean = 0.0;
  double std = 0.0;
};

struct Aggregate {
  std::size_t cases = 0;
  std::map<std::string, MetricStat> metrics;

  /// Throws MissingMetric.
  const MetricStat& at(const std::string& name) const;
};

enum class StdMode { Population, Sample };

/// Per-metric mean and standard deviation over cases, including one entry
/// per curve point (e.g. "Area_d5").
Aggregate aggregate(std::span<const MetricReport> reports, StdMode mode = StdMode::Population);

struct ClassAggregates {
  Aggregate hepatic;
  Aggregate portal;
};

struct LeaderboardEntry {
  std::string team;
  double score = 0.0;
  std::map<std::string, Aggregate> groups;  // "all" for task 1; "hepatic"/"portal" for task 2
};

struct Leaderboard {
  int task = 1;
  std::vector<LeaderboardEntry> entries;  // descending score, ties by team id
};

/// score = (clDice + IoU + NSD) / 3 over per-metric means.
Leaderboard rank_task1(const std::map<std::string, Aggregate>& teams);
/// score = mean of clDice, IoU, NSD means over both vessel classes.
Leaderboard rank_task2(const std::map<std::string, ClassAggregates>& teams);

std::string write_leaderboard(const Leaderboard& board, io::ReportFormat format);

/// Scores file: {"teams": {name: {metric: mean | {"mean": m, "std": s}}}} for
/// task 1, with an extra {"hepatic": ..., "portal": ...} level for task 2.
std::map<std::string, Aggregate> parse_task1_scores(std::string_view json_text);
std::map<std::string, ClassAggregates> parse_task2_scores(std::string_view json_text);

/// Runs fn(0..n-1) on at most `jobs` threads (0 = hardware concurrency).
/// The first exception thrown by any task is rethrown after all finish.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace vessel
