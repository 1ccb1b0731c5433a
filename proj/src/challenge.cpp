#include "vessel/challenge.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "vessel/json_format.hpp"

namespace vessel {

using nlohmann::json;

void EvalConfig::validate() const {
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] >= 0.0) || !std::isfinite(deltas[i])) {
      throw Error(ErrorCode::SpecInvalid, "sweep deltas must be finite and >= 0");
    }
    if (i > 0 && !(deltas[i] > deltas[i - 1])) {
      throw Error(ErrorCode::SpecInvalid, "sweep deltas must be strictly increasing");
    }
  }
}

io::ReportRecord MetricReport::to_record() const {
  io::ReportRecord r;
  r.case_id = case_id;
  r.metrics = {{metric_name::kClDice, cldice.cldice}, {metric_name::kDsc, dsc},
               {metric_name::kIou, iou},              {metric_name::kNsd, nsd},
               {metric_name::kArea, area},            {metric_name::kLength, length}};
  for (const auto& [d, v] : area_curve) r.area_curve[d] = v;
  for (const auto& [d, v] : length_curve) r.length_curve[d] = v;
  return r;
}

MetricReport evaluate_case(const BinaryMask& pred, const BinaryMask& ref, const EvalConfig& cfg,
                           std::string case_id) {
  require_same_grid(pred, ref);
  cfg.validate();
  const PairGeometry geo(pred, ref, cfg.geometric.metric);

  MetricReport r;
  r.case_id = std::move(case_id);
  r.cldice = geo.cldice(cfg.cldice_mode);
  r.dsc = dsc(pred, ref);
  r.iou = iou(pred, ref);
  r.nsd = nsd(pred, ref, cfg.nsd);
  r.area = geo.area(cfg.geometric.alpha);
  r.length = geo.length(cfg.geometric.beta);
  for (double d : cfg.deltas) {
    r.area_curve[d] = geo.area(d);
    r.length_curve[d] = geo.length(d);
  }
  return r;
}

MetricReport missing_case_report(std::string case_id, const EvalConfig& cfg) {
  MetricReport r;
  r.case_id = std::move(case_id);
  for (double d : cfg.deltas) {
    r.area_curve[d] = 0.0;
    r.length_curve[d] = 0.0;
  }
  return r;
}

MulticlassReport evaluate_multiclass(const LabelVolume& pred, const LabelVolume& ref,
                                     const EvalConfig& cfg, std::string case_id) {
  require_same_grid(pred.dims(), pred.spacing(), ref.dims(), ref.spacing());
  return {evaluate_case(pred.class_mask(VesselClass::Hepatic), ref.class_mask(VesselClass::Hepatic),
                        cfg, case_id),
          evaluate_case(pred.class_mask(VesselClass::Portal), ref.class_mask(VesselClass::Portal),
                        cfg, case_id)};
}

std::vector<SweepPoint> dilation_sweep(const BinaryMask& pred, const BinaryMask& ref,
                                       const EvalConfig& cfg) {
  require_same_grid(pred, ref);
  cfg.validate();
  const PairGeometry geo(pred, ref, cfg.geometric.metric);
  std::vector<SweepPoint> out;
  for (double d : cfg.deltas) {
    SweepPoint p{d, geo.area(d), geo.length(d)};
    if (!out.empty() && (p.area < out.back().area || p.length < out.back().length)) {
      throw std::logic_error("dilation sweep is not monotone at delta " + io::format_delta(d));
    }
    out.push_back(p);
  }
  return out;
}

const MetricStat& Aggregate::at(const std::string& name) const {
  const auto it = metrics.find(name);
  if (it == metrics.end()) throw Error(ErrorCode::MissingMetric, "aggregate has no " + name);
  return it->second;
}

Aggregate aggregate(std::span<const MetricReport> reports, StdMode mode) {
  if (reports.empty()) throw Error(ErrorCode::EmptyInput, "no reports to aggregate");
  std::map<std::string, std::vector<double>> columns;
  for (const auto& r : reports) {
    columns[metric_name::kClDice].push_back(r.cldice.cldice);
    columns[metric_name::kDsc].push_back(r.dsc);
    columns[metric_name::kIou].push_back(r.iou);
    columns[metric_name::kNsd].push_back(r.nsd);
    columns[metric_name::kArea].push_back(r.area);
    columns[metric_name::kLength].push_back(r.length);
    for (const auto& [d, v] : r.area_curve) columns["Area_d" + io::format_delta(d)].push_back(v);
    for (const auto& [d, v] : r.length_curve) columns["Length_d" + io::format_delta(d)].push_back(v);
  }
  Aggregate agg;
  agg.cases = reports.size();
  for (const auto& [name, xs] : columns) {
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double denom = mode == StdMode::Population ? n : n - 1.0;
    agg.metrics[name] = {mean, denom > 0.0 ? std::sqrt(ss / denom) : 0.0};
  }
  return agg;
}

namespace {

double ranking_mean(const Aggregate& a) {
  return (a.at(metric_name::kClDice).mean + a.at(metric_name::kIou).mean +
          a.at(metric_name::kNsd).mean) /
         3.0;
}

void sort_board(Leaderboard& b) {
  std::sort(b.entries.begin(), b.entries.end(), [](const auto& x, const auto& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.team < y.team;
  });
}

}  // namespace

Leaderboard rank_task1(const std::map<std::string, Aggregate>& teams) {
  Leaderboard b{1, {}};
  for (const auto& [team, agg] : teams) {
    b.entries.push_back({team, ranking_mean(agg), {{"all", agg}}});
  }
  sort_board(b);
  return b;
}

Leaderboard rank_task2(const std::map<std::string, ClassAggregates>& teams) {
  Leaderboard b{2, {}};
  for (const auto& [team, c] : teams) {
    const double score = (ranking_mean(c.hepatic) + ranking_mean(c.portal)) / 2.0;
    b.entries.push_back({team, score, {{"hepatic", c.hepatic}, {"portal", c.portal}}});
  }
  sort_board(b);
  return b;
}

std::string write_leaderboard(const Leaderboard& board, io::ReportFormat format) {
  if (format == io::ReportFormat::Json) {
    json entries = json::array();
    for (std::size_t i = 0; i < board.entries.size(); ++i) {
      const auto& e = board.entries[i];
      json groups = json::object();
      for (const auto& [g, agg] : e.groups) {
        json metrics = json::object();
        for (const auto& [m, s] : agg.metrics) metrics[m] = {{"mean", s.mean}, {"std", s.std}};
        groups[g] = {{"cases", agg.cases}, {"metrics", metrics}};
      }
      entries.push_back({{"rank", i + 1}, {"team", e.team}, {"score", e.score}, {"groups", groups}});
    }
    return dump_fixed(json{{"task", board.task}, {"entries", entries}}) + "\n";
  }
  std::ostringstream os;
  os << "rank,team,score\n";
  for (std::size_t i = 0; i < board.entries.size(); ++i) {
    os << i + 1 << ',' << board.entries[i].team << ',' << io::format_value(board.entries[i].score)
       << '\n';
  }
  return os.str();
}

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("scores file is not valid JSON: ") + e.what());
  }
}

const json& teams_of(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, "scores file must be a JSON object");
  const json& t = j.contains("teams") ? j["teams"] : j;
  if (!t.is_object()) throw Error(ErrorCode::SchemaError, "\"teams\" must be an object");
  return t;
}

Aggregate aggregate_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, where + " must be an object");
  Aggregate a;
  a.cases = 0;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "cases") {
      a.cases = it.value().get<std::size_t>();
      continue;
    }
    const json& v = it.value();
    MetricStat s;
    if (v.is_number()) {
      s.mean = v.get<double>();
    } else if (v.is_object() && v.contains("mean") && v["mean"].is_number()) {
      s.mean = v["mean"].get<double>();
      if (v.contains("std") && v["std"].is_number()) s.std = v["std"].get<double>();
    } else {
      throw Error(ErrorCode::SchemaError, where + "/" + it.key() + " is not a score");
    }
    if (!(s.mean >= 0.0 && s.mean <= 1.0)) {
      throw Error(ErrorCode::SchemaError, where + "/" + it.key() + " mean outside [0,1]");
    }
    a.metrics[it.key()] = s;
  }
  return a;
}

}  // namespace

std::map<std::string, Aggregate> parse_task1_scores(std::string_view text) {
  const json j = parse_json(text);
  std::map<std::string, Aggregate> out;
  for (const auto& [team, v] : teams_of(j).items()) out[team] = aggregate_from_json(v, team);
  return out;
}

std::map<std::string, ClassAggregates> parse_task2_scores(std::string_view text) {
  const json j = parse_json(text);
  std::map<std::string, ClassAggregates> out;
  for (const auto& [team, v] : teams_of(j).items()) {
    if (!v.is_object() || !v.contains("hepatic") || !v.contains("portal")) {
      throw Error(ErrorCode::MissingMetric, team + " needs \"hepatic\" and \"portal\" scores");
    }
    out[team] = {aggregate_from_json(v["hepatic"], team + "/hepatic"),
                 aggregate_from_json(v["portal"], team + "/portal")};
  }
  return out;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace vessel
