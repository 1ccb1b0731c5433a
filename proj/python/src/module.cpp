// Python bindings. Volumes are numpy arrays indexed [z, y, x] in C order, so
// the last axis is the fastest, matching the library's x-fastest layout.
// Spacing is always given as (dx, dy, dz) in mm.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vessel/challenge.hpp"
#include "vessel/error.hpp"
#include "vessel/io.hpp"
#include "vessel/metrics.hpp"
#include "vessel/morphology.hpp"
#include "vessel/phantom.hpp"
#include "vessel/postprocess.hpp"
#include "vessel/skeleton.hpp"

namespace py = pybind11;
using namespace vessel;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using SpacingTuple = std::array<double, 3>;

Dims dims_of(const py::array& a) {
  if (a.ndim() != 3) throw Error(ErrorCode::BadDims, "expected a 3D array indexed [z, y, x]");
  return {a.shape(2), a.shape(1), a.shape(0)};
}

std::vector<std::uint8_t> copy_bytes(const U8Array& a) {
  const auto* p = a.data();
  return {p, p + a.size()};
}

BinaryMask to_mask(const U8Array& a, const SpacingTuple& s) {
  return BinaryMask(dims_of(a), Spacing(s[0], s[1], s[2]), copy_bytes(a));
}

LabelVolume to_labels(const U8Array& a, const SpacingTuple& s) {
  return LabelVolume(dims_of(a), Spacing(s[0], s[1], s[2]), copy_bytes(a));
}

template <typename T>
py::array_t<T> to_array(const Dims& d, std::span<const T> values) {
  py::array_t<T> out({d.nz, d.ny, d.nx});
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

py::array_t<bool> mask_array(const BinaryMask& m) {
  py::array_t<bool> out({m.dims().nz, m.dims().ny, m.dims().nx});
  auto* p = out.mutable_data();
  for (std::size_t i = 0; i < m.size(); ++i) p[i] = m[i];
  return out;
}

py::tuple spacing_tuple(const Spacing& s) { return py::make_tuple(s.dx(), s.dy(), s.dz()); }

DistanceMetric metric_of(const std::string& name) {
  if (name == "voxel") return DistanceMetric::VoxelIsotropic;
  if (name == "physical") return DistanceMetric::Physical;
  throw py::value_error("metric must be 'voxel' or 'physical'");
}

ClDiceMode mode_of(const std::string& name) {
  if (name == "mask") return ClDiceMode::SkeletonVsMask;
  if (name == "skeleton") return ClDiceMode::SkeletonVsSkeleton;
  throw py::value_error("mode must be 'mask' or 'skeleton'");
}

py::dict cldice_dict(const ClDiceBreakdown& b) {
  py::dict d;
  d["t_prec"] = b.t_prec;
  d["t_sens"] = b.t_sens;
  d["cldice"] = b.cldice;
  return d;
}

py::dict report_dict(const MetricReport& r) {
  py::dict d;
  d["case_id"] = r.case_id;
  d["clDice"] = r.cldice.cldice;
  d["t_prec"] = r.cldice.t_prec;
  d["t_sens"] = r.cldice.t_sens;
  d["DSC"] = r.dsc;
  d["IoU"] = r.iou;
  d["NSD"] = r.nsd;
  d["Area"] = r.area;
  d["Length"] = r.length;
  d["area_curve"] = r.area_curve;
  d["length_curve"] = r.length_curve;
  return d;
}

EvalConfig eval_config(double tau, double alpha, double beta, std::vector<double> deltas,
                       const std::string& cldice_mode, const std::string& metric) {
  EvalConfig cfg;
  cfg.nsd = NsdConfig(tau);
  cfg.geometric = GeometricConfig(alpha, beta, metric_of(metric));
  cfg.deltas = std::move(deltas);
  cfg.cldice_mode = mode_of(cldice_mode);
  return cfg;
}

Aggregate aggregate_of(const std::map<std::string, double>& means) {
  Aggregate a;
  a.cases = 1;
  for (const auto& [k, v] : means) a.metrics[k] = {v, 0.0};
  return a;
}

py::list board_list(const Leaderboard& b) {
  py::list out;
  for (const auto& e : b.entries) out.append(py::make_tuple(e.team, e.score));
  return out;
}

const SpacingTuple kUnit{1.0, 1.0, 1.0};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Vessel segmentation metrics: clDice, DSC, IoU, NSD, Area, Length";

  static py::exception<Error> error(m, "VesselError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object code = py::str(to_string(e.code()));
      PyErr_SetObject(error.ptr(), py::make_tuple(py::str(e.what()), code).ptr());
    }
  });

  // metrics
  m.def("iou", [](const U8Array& a, const U8Array& b) {
    return iou(to_mask(a, kUnit), to_mask(b, kUnit));
  }, py::arg("a"), py::arg("b"));
  m.def("dsc", [](const U8Array& a, const U8Array& b) {
    return dsc(to_mask(a, kUnit), to_mask(b, kUnit));
  }, py::arg("a"), py::arg("b"));
  m.def("cldice", [](const U8Array& pred, const U8Array& ref, const std::string& mode) {
    return cldice_dict(cldice(to_mask(pred, kUnit), to_mask(ref, kUnit), mode_of(mode)));
  }, py::arg("pred"), py::arg("ref"), py::arg("mode") = "mask");
  m.def("nsd", [](const U8Array& a, const U8Array& b, double tau, const SpacingTuple& s) {
    return nsd(to_mask(a, s), to_mask(b, s), NsdConfig(tau));
  }, py::arg("a"), py::arg("b"), py::arg("tau") = 2.0, py::arg("spacing") = kUnit);
  m.def("area_measure", [](const U8Array& pred, const U8Array& ref, double alpha,
                           const SpacingTuple& s, const std::string& metric) {
    return area_measure(to_mask(pred, s), to_mask(ref, s), alpha, metric_of(metric));
  }, py::arg("pred"), py::arg("ref"), py::arg("alpha") = 5.0, py::arg("spacing") = kUnit,
     py::arg("metric") = "voxel");
  m.def("length_measure", [](const U8Array& pred, const U8Array& ref, double beta,
                             const SpacingTuple& s, const std::string& metric) {
    return length_measure(to_mask(pred, s), to_mask(ref, s), beta, metric_of(metric));
  }, py::arg("pred"), py::arg("ref"), py::arg("beta") = 5.0, py::arg("spacing") = kUnit,
     py::arg("metric") = "voxel");

  m.def("evaluate_case",
        [](const U8Array& pred, const U8Array& ref, const SpacingTuple& s, double tau, double alpha,
           double beta, std::vector<double> deltas, const std::string& cldice_mode,
           const std::string& metric, const std::string& case_id) {
          const auto cfg = eval_config(tau, alpha, beta, std::move(deltas), cldice_mode, metric);
          py::gil_scoped_release release;
          auto r = evaluate_case(to_mask(pred, s), to_mask(ref, s), cfg, case_id);
          py::gil_scoped_acquire acquire;
          return report_dict(r);
        },
        py::arg("pred"), py::arg("ref"), py::arg("spacing") = kUnit, py::arg("tau") = 2.0,
        py::arg("alpha") = 5.0, py::arg("beta") = 5.0,
        py::arg("deltas") = std::vector<double>{1, 3, 5, 7, 10}, py::arg("cldice_mode") = "mask",
        py::arg("metric") = "voxel", py::arg("case_id") = "");

  m.def("evaluate_multiclass",
        [](const U8Array& pred, const U8Array& ref, const SpacingTuple& s, double tau) {
          EvalConfig cfg;
          cfg.nsd = NsdConfig(tau);
          const auto r = evaluate_multiclass(to_labels(pred, s), to_labels(ref, s), cfg);
          py::dict d;
          d["hepatic"] = report_dict(r.hepatic);
          d["portal"] = report_dict(r.portal);
          return d;
        },
        py::arg("pred"), py::arg("ref"), py::arg("spacing") = kUnit, py::arg("tau") = 2.0);

  m.def("dilation_sweep",
        [](const U8Array& pred, const U8Array& ref, std::vector<double> deltas) {
          EvalConfig cfg;
          cfg.deltas = std::move(deltas);
          py::list out;
          for (const auto& p : dilation_sweep(to_mask(pred, kUnit), to_mask(ref, kUnit), cfg)) {
            out.append(py::make_tuple(p.delta, p.area, p.length));
          }
          return out;
        },
        py::arg("pred"), py::arg("ref"), py::arg("deltas") = std::vector<double>{1, 3, 5, 7, 10});

  // morphology and skeleton
  m.def("squared_edt", [](const U8Array& a, const SpacingTuple& s, const std::string& metric) {
    const auto f = squared_edt(to_mask(a, s), metric_of(metric));
    return to_array<double>(f.dims, f.values);
  }, py::arg("mask"), py::arg("spacing") = kUnit, py::arg("metric") = "voxel");
  m.def("dilate", [](const U8Array& a, double r, const SpacingTuple& s, const std::string& metric) {
    return mask_array(dilate(to_mask(a, s), r, metric_of(metric)));
  }, py::arg("mask"), py::arg("radius"), py::arg("spacing") = kUnit, py::arg("metric") = "voxel");
  m.def("erode", [](const U8Array& a, double r, const SpacingTuple& s, const std::string& metric) {
    return mask_array(erode(to_mask(a, s), r, metric_of(metric)));
  }, py::arg("mask"), py::arg("radius"), py::arg("spacing") = kUnit, py::arg("metric") = "voxel");
  m.def("boundary", [](const U8Array& a) { return mask_array(boundary(to_mask(a, kUnit))); },
        py::arg("mask"));
  m.def("connected_components", [](const U8Array& a, int connectivity) {
    if (connectivity != 6 && connectivity != 26) throw py::value_error("connectivity must be 6 or 26");
    const auto cc = connected_components(to_mask(a, kUnit), static_cast<Connectivity>(connectivity));
    return py::make_tuple(to_array<std::uint32_t>(cc.dims, cc.ids), cc.sizes);
  }, py::arg("mask"), py::arg("connectivity") = 26);
  m.def("skeletonize", [](const U8Array& a) {
    const auto mask = to_mask(a, kUnit);
    py::gil_scoped_release release;
    auto s = skeletonize(mask);
    py::gil_scoped_acquire acquire;
    return mask_array(s.mask);
  }, py::arg("mask"));

  // post-processing
  m.def("apply_liver_mask", [](const U8Array& labels, const U8Array& liver) {
    const auto out = apply_liver_mask(to_labels(labels, kUnit), to_mask(liver, kUnit));
    return to_array<std::uint8_t>(out.dims(), out.labels());
  }, py::arg("labels"), py::arg("liver"));
  m.def("keep_largest_per_class", [](const U8Array& labels, int connectivity) {
    const auto out = keep_largest_per_class(to_labels(labels, kUnit),
                                            static_cast<Connectivity>(connectivity));
    return to_array<std::uint8_t>(out.dims(), out.labels());
  }, py::arg("labels"), py::arg("connectivity") = 26);
  m.def("resample_nearest", [](const U8Array& labels, const SpacingTuple& s, const SpacingTuple& t) {
    const auto out = resample_nearest(to_labels(labels, s), Spacing(t[0], t[1], t[2]));
    return to_array<std::uint8_t>(out.dims(), out.labels());
  }, py::arg("labels"), py::arg("spacing"), py::arg("target"));

  // phantoms
  m.def("gen_capsule", [](const std::vector<SpacingTuple>& path, double radius,
                          const std::array<std::int64_t, 3>& shape) {
    std::vector<Point3> pts;
    for (const auto& p : path) pts.push_back({p[0], p[1], p[2]});
    return mask_array(gen_capsule(Polyline(pts), radius, {shape[2], shape[1], shape[0]}));
  }, py::arg("path"), py::arg("radius"), py::arg("shape"),
     "Capsule around a polyline of (x, y, z) points; shape is (nz, ny, nx).");
  m.def("gen_tree", [](const std::array<std::int64_t, 3>& shape, std::uint64_t seed, int depth,
                       double root_radius, double decay) {
    TreeSpec spec;
    spec.seed = seed;
    spec.depth = depth;
    spec.root_radius = root_radius;
    spec.decay = decay;
    const auto t = gen_tree(spec, {shape[2], shape[1], shape[0]});
    py::list lines;
    for (const auto& l : t.centerlines) {
      py::list pts;
      for (const auto& p : l.points()) pts.append(py::make_tuple(p.x, p.y, p.z));
      lines.append(pts);
    }
    return py::make_tuple(mask_array(t.mask), lines);
  }, py::arg("shape"), py::arg("seed") = 1, py::arg("depth") = 3, py::arg("root_radius") = 3.0,
     py::arg("decay") = 0.7);

  // io
  m.def("read_nifti", [](const py::bytes& data, bool permissive) {
    const std::string_view s = data;
    io::ReadOptions opts;
    opts.permissive = permissive;
    const auto img = io::read_nifti(
        io::ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()), opts);
    return py::make_tuple(to_array<std::uint8_t>(img.volume.dims(), img.volume.labels()),
                          spacing_tuple(img.volume.spacing()));
  }, py::arg("data"), py::arg("permissive") = false);
  m.def("write_nifti", [](const U8Array& labels, const SpacingTuple& s) {
    const auto b = io::write_nifti(to_labels(labels, s));
    return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
  }, py::arg("labels"), py::arg("spacing") = kUnit);

  // ranking
  m.def("rank_task1", [](const std::map<std::string, std::map<std::string, double>>& teams) {
    std::map<std::string, Aggregate> in;
    for (const auto& [t, means] : teams) in[t] = aggregate_of(means);
    return board_list(rank_task1(in));
  }, py::arg("teams"), "teams: {team: {metric: mean}} -> [(team, score)] best first");
  m.def("rank_task2",
        [](const std::map<std::string, std::map<std::string, std::map<std::string, double>>>& teams) {
          std::map<std::string, ClassAggregates> in;
          for (const auto& [t, classes] : teams) {
            const auto h = classes.find("hepatic"), p = classes.find("portal");
            if (h == classes.end() || p == classes.end()) {
              throw Error(ErrorCode::MissingMetric, t + " needs hepatic and portal means");
            }
            in[t] = {aggregate_of(h->second), aggregate_of(p->second)};
          }
          return board_list(rank_task2(in));
        },
        py::arg("teams"));
}
