#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "vessel/challenge.hpp"
#include "vessel/io.hpp"
#include "vessel/json_format.hpp"
#include "vessel/phantom.hpp"
#include "vessel/postprocess.hpp"

namespace vessel::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct MetricFlags {
  double tau = 2.0;
  double alpha = 5.0;
  double beta = 5.0;
  std::string deltas = "1,3,5,7,10";
  std::string cldice_mode = "mask";
  bool physical_dilation = false;

  void add_to(CLI::App* app) {
    app->add_option("--tau", tau, "NSD tolerance in mm")->capture_default_str();
    app->add_option("--alpha", alpha, "Area dilation radius (voxels)")->capture_default_str();
    app->add_option("--beta", beta, "Length dilation radius (voxels)")->capture_default_str();
    app->add_option("--deltas", deltas, "Comma-separated sweep radii")->capture_default_str();
    app->add_option("--cldice-mode", cldice_mode,
                    "mask: skeleton vs other mask; skeleton: skeleton vs skeleton")
        ->check(CLI::IsMember({"mask", "skeleton"}))
        ->capture_default_str();
    app->add_flag("--physical-dilation", physical_dilation,
                  "Measure Area/Length dilation radii in mm instead of voxels");
  }

  EvalConfig config() const {
    EvalConfig cfg;
    cfg.nsd = NsdConfig(tau);
    cfg.geometric = GeometricConfig(alpha, beta,
                                    physical_dilation ? DistanceMetric::Physical
                                                      : DistanceMetric::VoxelIsotropic);
    cfg.deltas = parse_list(deltas);
    cfg.cldice_mode =
        cldice_mode == "skeleton" ? ClDiceMode::SkeletonVsSkeleton : ClDiceMode::SkeletonVsMask;
    cfg.validate();
    return cfg;
  }

  static std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw CLI::ValidationError("--deltas", "'" + item + "' is not a number");
      }
    }
    return out;
  }
};

struct InputFlags {
  bool permissive = false;
  int hepatic_value = 1;
  int portal_value = 2;

  void add_to(CLI::App* app) {
    app->add_flag("--permissive", permissive, "Map unknown nonzero values to label 1");
    app->add_option("--hepatic-value", hepatic_value, "Stored value of hepatic voxels")
        ->check(CLI::Range(1, 255))
        ->capture_default_str();
    app->add_option("--portal-value", portal_value, "Stored value of portal voxels")
        ->check(CLI::Range(1, 255))
        ->capture_default_str();
  }

  io::ReadOptions options() const {
    return {static_cast<std::uint8_t>(hepatic_value), static_cast<std::uint8_t>(portal_value),
            permissive};
  }
};

struct OutputFlags {
  std::string out_path;
  bool csv = false;

  void add_to(CLI::App* app) {
    app->add_option("--out", out_path, "Write results here instead of standard output");
    app->add_flag("--csv", csv, "Emit CSV instead of JSON");
  }

  io::ReportFormat format() const { return csv ? io::ReportFormat::Csv : io::ReportFormat::Json; }

  void emit(const std::string& text, std::ostream& out) const {
    if (out_path.empty()) {
      out << text;
    } else {
      io::write_file(out_path, text);
    }
  }
};

unsigned resolve_jobs(int flag) {
  if (flag > 0) return static_cast<unsigned>(flag);
  if (const char* env = std::getenv("VESSEL_METRICS_JOBS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 0;  // hardware concurrency
}

bool is_volume_file(const fs::path& p) {
  const auto name = p.filename().string();
  const auto ends = [&](std::string_view s) {
    return name.size() >= s.size() && name.compare(name.size() - s.size(), s.size(), s) == 0;
  };
  return ends(".nii") || ends(".nii.gz") || ends(".json");
}

std::string case_id_of(const fs::path& p) {
  auto name = p.filename().string();
  for (std::string_view ext : {".nii.gz", ".nii", ".json"}) {
    if (name.size() > ext.size() && name.compare(name.size() - ext.size(), ext.size(), ext) == 0) {
      return name.substr(0, name.size() - ext.size());
    }
  }
  return name;
}

// Case id -> file, for a single file or every volume in a directory.
std::map<std::string, fs::path> collect_cases(const fs::path& p) {
  std::map<std::string, fs::path> out;
  if (fs::is_directory(p)) {
    for (const auto& e : fs::directory_iterator(p)) {
      if (e.is_regular_file() && is_volume_file(e.path())) out[case_id_of(e.path())] = e.path();
    }
  } else {
    out[case_id_of(p)] = p;
  }
  return out;
}

struct CasePlan {
  std::string id;
  std::optional<fs::path> pred;
  fs::path ref;
};

std::vector<CasePlan> plan_cases(const std::string& pred, const std::string& ref) {
  if (!fs::exists(ref)) throw Error(ErrorCode::IoFailure, "no such reference: " + ref);
  if (!fs::exists(pred)) throw Error(ErrorCode::IoFailure, "no such prediction: " + pred);
  std::vector<CasePlan> plans;
  if (!fs::is_directory(ref)) {
    plans.push_back({case_id_of(ref), fs::path(pred), fs::path(ref)});
    return plans;
  }
  const auto refs = collect_cases(ref);
  const auto preds = collect_cases(pred);
  for (const auto& [id, path] : refs) {
    const auto it = preds.find(id);
    plans.push_back({id, it == preds.end() ? std::nullopt : std::optional(it->second), path});
  }
  if (plans.empty()) throw Error(ErrorCode::EmptyInput, "no volumes found in " + ref);
  return plans;
}

int cmd_evaluate(const std::string& pred, const std::string& ref, const MetricFlags& mf,
                 const InputFlags& inf, const OutputFlags& of, int jobs, bool multiclass,
                 std::ostream& out) {
  const EvalConfig cfg = mf.config();
  const auto plans = plan_cases(pred, ref);
  std::vector<std::vector<MetricReport>> results(plans.size());
  parallel_for(plans.size(), resolve_jobs(jobs), [&](std::size_t i) {
    const auto& plan = plans[i];
    const auto ref_v = io::load_volume(plan.ref, inf.options());
    if (!plan.pred) {
      if (multiclass) {
        results[i] = {missing_case_report(plan.id + "/hepatic", cfg),
                      missing_case_report(plan.id + "/portal", cfg)};
      } else {
        results[i] = {missing_case_report(plan.id, cfg)};
      }
      return;
    }
    const auto pred_v = io::load_volume(*plan.pred, inf.options());
    if (multiclass) {
      auto r = evaluate_multiclass(pred_v, ref_v, cfg, plan.id);
      r.hepatic.case_id = plan.id + "/hepatic";
      r.portal.case_id = plan.id + "/portal";
      results[i] = {std::move(r.hepatic), std::move(r.portal)};
    } else {
      results[i] = {evaluate_case(pred_v.foreground(), ref_v.foreground(), cfg, plan.id)};
    }
  });
  std::vector<io::ReportRecord> records;
  for (const auto& group : results)
    for (const auto& r : group) records.push_back(r.to_record());
  of.emit(io::write_report(records, of.format()), out);
  return kExitOk;
}

int cmd_sweep(const std::string& pred, const std::string& ref, const MetricFlags& mf,
              const InputFlags& inf, const OutputFlags& of, std::ostream& out) {
  const EvalConfig cfg = mf.config();
  const auto p = io::load_volume(pred, inf.options()).foreground();
  const auto r = io::load_volume(ref, inf.options()).foreground();
  const auto points = dilation_sweep(p, r, cfg);
  std::string text;
  if (of.csv) {
    text = "delta,area,length\n";
    for (const auto& pt : points) {
      text += io::format_delta(pt.delta) + "," + io::format_value(pt.area) + "," +
              io::format_value(pt.length) + "\n";
    }
  } else {
    json arr = json::array();
    for (const auto& pt : points) {
      arr.push_back({{"delta", pt.delta}, {"area", pt.area}, {"length", pt.length}});
    }
    text = dump_fixed(json{{"points", arr}}) + "\n";
  }
  of.emit(text, out);
  return kExitOk;
}

int cmd_rank(int task, const std::string& scores, const OutputFlags& of, std::ostream& out) {
  const auto bytes = io::read_file(scores);
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  const Leaderboard board =
      task == 1 ? rank_task1(parse_task1_scores(text)) : rank_task2(parse_task2_scores(text));
  of.emit(write_leaderboard(board, of.format()), out);
  return kExitOk;
}

Spacing parse_spacing(const std::string& text) {
  const auto v = MetricFlags::parse_list(text);
  if (v.size() != 3) throw CLI::ValidationError("spacing", "expected dx,dy,dz");
  return Spacing(v[0], v[1], v[2]);
}

std::vector<std::int64_t> parse_ints(const std::string& text, std::size_t n, const char* what) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError(what, "'" + item + "' is not an integer");
    }
  }
  if (out.size() != n) {
    throw CLI::ValidationError(what, "expected " + std::to_string(n) + " comma-separated integers");
  }
  return out;
}

json centerlines_json(const std::vector<Polyline>& lines) {
  json arr = json::array();
  for (const auto& l : lines) {
    json pts = json::array();
    for (const auto& p : l.points()) pts.push_back({p.x, p.y, p.z});
    arr.push_back(pts);
  }
  return arr;
}

fs::path sidecar_path_for(const fs::path& volume) {
  return volume.parent_path() / (case_id_of(volume) + ".centerlines.json");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vessel segmentation metrics: clDice, DSC, IoU, NSD, Area, Length", "vessel-metrics"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  int jobs = 0;
  MetricFlags mf;
  InputFlags inf;
  OutputFlags of;

  // evaluate / evaluate-multiclass
  std::string pred, ref;
  auto* evaluate = app.add_subcommand("evaluate", "Binary (task 1) evaluation of prediction vs reference");
  auto* evaluate_mc =
      app.add_subcommand("evaluate-multiclass", "Per-class (hepatic, portal) evaluation (task 2)");
  for (auto* sub : {evaluate, evaluate_mc}) {
    sub->add_option("--pred", pred, "Prediction volume or directory")->required();
    sub->add_option("--ref", ref, "Reference volume or directory")->required();
    sub->add_option("--jobs", jobs, "Concurrent cases (default: $VESSEL_METRICS_JOBS or all cores)");
    mf.add_to(sub);
    inf.add_to(sub);
    of.add_to(sub);
  }

  auto* sweep = app.add_subcommand("sweep", "Area and Length over a range of dilation radii");
  sweep->add_option("--pred", pred, "Prediction volume")->required();
  sweep->add_option("--ref", ref, "Reference volume")->required();
  mf.add_to(sweep);
  inf.add_to(sweep);
  of.add_to(sweep);

  int task = 1;
  std::string scores;
  auto* rank = app.add_subcommand("rank", "Rank teams by mean of clDice, IoU and NSD");
  rank->add_option("--task", task, "1 = binary segmentation, 2 = hepatic/portal")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  rank->add_option("--scores", scores, "JSON file of per-team metric means")->required();
  of.add_to(rank);

  std::string in_path, liver_path, resample;
  int connectivity = 26;
  bool largest = false;
  auto* post = app.add_subcommand(
      "postprocess", "Liver gating, largest-component filtering and resampling, in flag order");
  post->add_option("--in", in_path, "Input label volume")->required();
  auto* liver_opt = post->add_option("--liver-mask", liver_path, "AND-gate with this liver mask");
  auto* largest_opt =
      post->add_flag("--largest-component", largest, "Keep the largest component per class");
  auto* resample_opt =
      post->add_option("--resample", resample, "Nearest-neighbor resample to dx,dy,dz mm");
  post->add_option("--connectivity", connectivity, "Component adjacency")
      ->check(CLI::IsMember({6, 26}))
      ->capture_default_str();
  inf.add_to(post);
  post->add_option("--out", of.out_path, "Output volume (.nii, .nii.gz, .json)")->required();

  std::string kind = "tree", dims_text = "64,64,64", spacing_text = "1,1,1", breaks, shift;
  double radius = 3.0, thicken = 0.0, thin = 0.0, decay = 0.7;
  std::uint64_t seed = 1;
  int depth = 3;
  auto* phantom = app.add_subcommand("phantom", "Generate a synthetic vessel phantom");
  phantom->add_option("--kind", kind, "tube or tree")
      ->check(CLI::IsMember({"tube", "tree"}))
      ->capture_default_str();
  phantom->add_option("--dims", dims_text, "nx,ny,nz")->capture_default_str();
  phantom->add_option("--spacing", spacing_text, "dx,dy,dz in mm")->capture_default_str();
  phantom->add_option("--radius", radius, "Tube radius / tree root radius (voxels)")
      ->capture_default_str();
  phantom->add_option("--seed", seed, "Tree random seed")->capture_default_str();
  phantom->add_option("--depth", depth, "Tree generations")->capture_default_str();
  phantom->add_option("--decay", decay, "Tree radius decay per generation")->capture_default_str();
  phantom->add_option("--break", breaks, "Degrade: zero slab axis,center,thickness");
  phantom->add_option("--thicken", thicken, "Degrade: dilate by radius");
  phantom->add_option("--thin", thin, "Degrade: erode by radius");
  phantom->add_option("--shift", shift, "Degrade: translate by dx,dy,dz");
  phantom->add_option("--out", of.out_path, "Output volume (.nii, .nii.gz, .json)")->required();

  std::string convert_out;
  auto* convert = app.add_subcommand("convert", "Convert between .nii, .nii.gz and .json/.raw");
  convert->add_option("--in", in_path, "Input volume")->required();
  convert->add_option("--out", convert_out, "Output volume")->required();
  inf.add_to(convert);

  auto* info = app.add_subcommand("info", "Describe a volume: dims, spacing, label counts");
  info->add_option("--in", in_path, "Input volume")->required();
  inf.add_to(info);
  info->add_option("--out", of.out_path, "Write results here instead of standard output");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*evaluate) return cmd_evaluate(pred, ref, mf, inf, of, jobs, false, out);
    if (*evaluate_mc) return cmd_evaluate(pred, ref, mf, inf, of, jobs, true, out);
    if (*sweep) return cmd_sweep(pred, ref, mf, inf, of, out);
    if (*rank) return cmd_rank(task, scores, of, out);

    if (*post) {
      auto v = io::load_volume(in_path, inf.options());
      const auto conn = connectivity == 6 ? Connectivity::Face6 : Connectivity::Full26;
      for (const CLI::Option* opt : post->parse_order()) {
        if (opt == liver_opt) {
          const auto liver = io::load_volume(liver_path, inf.options()).foreground();
          v = apply_liver_mask(v, liver);
        } else if (opt == largest_opt) {
          v = keep_largest_per_class(v, conn);
        } else if (opt == resample_opt) {
          v = resample_nearest(v, parse_spacing(resample));
        }
      }
      io::save_volume(of.out_path, v);
      return kExitOk;
    }

    if (*phantom) {
      const auto d = parse_ints(dims_text, 3, "--dims");
      const Dims dims{d[0], d[1], d[2]};
      const Spacing spacing = parse_spacing(spacing_text);
      BinaryMask mask = BinaryMask::empty(dims, spacing);
      std::vector<Polyline> lines;
      if (kind == "tube") {
        const double cx = static_cast<double>(dims.nx / 2), cy = static_cast<double>(dims.ny / 2);
        const double z0 = std::min(std::ceil(radius), static_cast<double>(dims.nz - 1));
        const double z1 = std::max(z0, static_cast<double>(dims.nz - 1) - std::ceil(radius));
        lines.emplace_back(std::vector<Point3>{{cx, cy, z0}, {cx, cy, z1 > z0 ? z1 : z0 + 1}});
        mask = gen_capsule(lines.back(), radius, dims, spacing);
      } else {
        TreeSpec spec;
        spec.seed = seed;
        spec.depth = depth;
        spec.root_radius = radius;
        spec.decay = decay;
        auto tree = gen_tree(spec, dims, spacing);
        mask = std::move(tree.mask);
        lines = std::move(tree.centerlines);
      }
      // Degradations apply in command-line order.
      std::vector<DegradeOp> ops;
      for (const CLI::Option* opt : phantom->parse_order()) {
        const auto name = opt->get_name();
        if (name == "--break") {
          const auto b = parse_ints(breaks, 3, "--break");
          ops.push_back(degrade_ops::Break{static_cast<int>(b[0]), b[1], b[2]});
        } else if (name == "--thicken") {
          ops.push_back(degrade_ops::Thicken{thicken});
        } else if (name == "--thin") {
          ops.push_back(degrade_ops::Thin{thin});
        } else if (name == "--shift") {
          const auto s = parse_ints(shift, 3, "--shift");
          ops.push_back(degrade_ops::Shift{s[0], s[1], s[2]});
        }
      }
      mask = degrade(mask, ops);
      const fs::path out_path(of.out_path);
      io::save_volume(out_path, LabelVolume::from_mask(mask));
      const json sidecar = {{"kind", kind},
                            {"dims", {dims.nx, dims.ny, dims.nz}},
                            {"radius", radius},
                            {"seed", seed},
                            {"depth", depth},
                            {"centerlines", centerlines_json(lines)}};
      io::write_file(sidecar_path_for(out_path), dump_fixed(sidecar) + "\n");
      return kExitOk;
    }

    if (*convert) {
      io::save_volume(convert_out, io::load_volume(in_path, inf.options()));
      return kExitOk;
    }

    if (*info) {
      const auto v = io::load_volume(in_path, inf.options());
      std::array<std::size_t, 3> counts{};
      for (auto l : v.labels()) ++counts[l];
      json j = {{"path", in_path},
                {"dims", {v.dims().nx, v.dims().ny, v.dims().nz}},
                {"spacing_mm", {v.spacing().dx(), v.spacing().dy(), v.spacing().dz()}},
                {"voxels", {{"background", counts[0]}, {"hepatic", counts[1]}, {"portal", counts[2]}}}};
      const std::string name = fs::path(in_path).filename().string();
      if (name.find(".nii") != std::string::npos) {
        const auto h = io::read_nifti(io::read_file(in_path), inf.options()).header;
        j["nifti"] = {{"datatype", h.datatype},
                      {"bitpix", h.bitpix},
                      {"vox_offset", h.vox_offset},
                      {"scl_slope", h.scl_slope},
                      {"scl_inter", h.scl_inter},
                      {"endianness", h.endianness == io::Endianness::Little ? "little" : "big"}};
      }
      of.emit(dump_fixed(j) + "\n", out);
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    err << "vessel-metrics: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "vessel-metrics: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "vessel-metrics: " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitUsage;
}

}  // namespace vessel::cli
