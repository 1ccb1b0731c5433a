#include <array>
#include <charconv>
#include <cstdio>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vessel/io.hpp"
#include "vessel/json_format.hpp"

namespace vessel::io {

using nlohmann::json;

namespace {

constexpr std::array<const char*, 4> kScalarColumns{"clDice", "DSC", "IoU", "NSD"};

void check_value(const std::optional<double>& v, const std::string& where) {
  if (v && !(*v >= 0.0 && *v <= 1.0)) {
    throw Error(ErrorCode::SchemaError, where + " = " + std::to_string(*v) + " is outside [0,1]");
  }
}

void validate(const ReportRecord& r) {
  for (const auto& [k, v] : r.metrics) check_value(v, r.case_id + "/" + k);
  for (const auto& [d, v] : r.area_curve) check_value(v, r.case_id + "/Area_d" + format_delta(d));
  for (const auto& [d, v] : r.length_curve) check_value(v, r.case_id + "/Length_d" + format_delta(d));
}

json value_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json curve_json(const std::map<double, std::optional<double>>& curve) {
  json out = json::object();
  for (const auto& [d, v] : curve) out[format_delta(d)] = value_json(v);
  return out;
}

std::string cell(const std::optional<double>& v) { return v ? format_value(*v) : std::string(); }

std::optional<double> lookup(const std::map<double, std::optional<double>>& curve, double d) {
  const auto it = curve.find(d);
  return it == curve.end() ? std::nullopt : it->second;
}

std::optional<double> parse_value(const json& v, const std::string& where) {
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw Error(ErrorCode::SchemaError, where + " is not a number");
  return v.get<double>();
}

std::map<double, std::optional<double>> parse_curve(const json& j, const std::string& where) {
  std::map<double, std::optional<double>> out;
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    double d = 0.0;
    const auto& key = it.key();
    const auto res = std::from_chars(key.data(), key.data() + key.size(), d);
    if (res.ec != std::errc{} || res.ptr != key.data() + key.size()) {
      throw Error(ErrorCode::SchemaError, where + " key \"" + key + "\" is not a number");
    }
    out[d] = parse_value(it.value(), where + "/" + key);
  }
  return out;
}

}  // namespace

std::string format_delta(double delta) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, delta);
  return std::string(buf, res.ptr);
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string write_report(std::span<const ReportRecord> records, ReportFormat format) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no report records");
  for (const auto& r : records) validate(r);

  if (format == ReportFormat::Json) {
    json arr = json::array();
    for (const auto& r : records) {
      json metrics = json::object();
      for (const auto& [k, v] : r.metrics) metrics[k] = value_json(v);
      arr.push_back({{"case_id", r.case_id},
                     {"metrics", metrics},
                     {"area_curve", curve_json(r.area_curve)},
                     {"length_curve", curve_json(r.length_curve)}});
    }
    return dump_fixed(json{{"records", arr}}) + "\n";
  }

  std::set<double> deltas;
  for (const auto& r : records) {
    for (const auto& [d, v] : r.area_curve) deltas.insert(d);
    for (const auto& [d, v] : r.length_curve) deltas.insert(d);
  }
  std::ostringstream os;
  os << "case_id";
  for (const char* c : kScalarColumns) os << ',' << c;
  for (double d : deltas) os << ",Area_d" << format_delta(d);
  for (double d : deltas) os << ",Length_d" << format_delta(d);
  os << '\n';
  for (const auto& r : records) {
    os << r.case_id;
    for (const char* c : kScalarColumns) {
      const auto it = r.metrics.find(c);
      os << ',' << (it == r.metrics.end() ? std::string() : cell(it->second));
    }
    for (double d : deltas) os << ',' << cell(lookup(r.area_curve, d));
    for (double d : deltas) os << ',' << cell(lookup(r.length_curve, d));
    os << '\n';
  }
  return os.str();
}

std::vector<ReportRecord> parse_report_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("report is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("records") || !j["records"].is_array()) {
    throw Error(ErrorCode::SchemaError, "report needs a \"records\" array");
  }
  std::vector<ReportRecord> out;
  for (const auto& rj : j["records"]) {
    if (!rj.is_object() || !rj.contains("case_id") || !rj["case_id"].is_string()) {
      throw Error(ErrorCode::SchemaError, "record without string case_id");
    }
    ReportRecord r;
    r.case_id = rj["case_id"].get<std::string>();
    if (rj.contains("metrics")) {
      if (!rj["metrics"].is_object()) throw Error(ErrorCode::SchemaError, "metrics must be an object");
      for (auto it = rj["metrics"].begin(); it != rj["metrics"].end(); ++it) {
        r.metrics[it.key()] = parse_value(it.value(), r.case_id + "/" + it.key());
      }
    }
    if (rj.contains("area_curve")) r.area_curve = parse_curve(rj["area_curve"], r.case_id + "/area_curve");
    if (rj.contains("length_curve")) {
      r.length_curve = parse_curve(rj["length_curve"], r.case_id + "/length_curve");
    }
    validate(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace vessel::io
