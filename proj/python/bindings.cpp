#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dendrodist/clustering.hpp"
#include "dendrodist/harness.hpp"
#include "dendrodist/ingest.hpp"
#include "dendrodist/metrics.hpp"
#include "dendrodist/rng.hpp"
#include "dendrodist/synthdata.hpp"

namespace py = pybind11;
using namespace dd;

namespace {

py::object json_to_py(const Json& j) {
    switch (j.type()) {
    case Json::value_t::null: return py::none();
    case Json::value_t::boolean: return py::bool_(j.get<bool>());
    case Json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case Json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case Json::value_t::number_float: return py::float_(j.get<double>());
    case Json::value_t::string: return py::str(j.get<std::string>());
    case Json::value_t::array: {
        py::list out;
        for (const Json& item : j) {
            out.append(json_to_py(item));
        }
        return out;
    }
    case Json::value_t::object: {
        py::dict out;
        for (const auto& [key, value] : j.items()) {
            out[py::str(key)] = json_to_py(value);
        }
        return out;
    }
    default: return py::none();
    }
}

AlignStrategy align_from_string(const std::string& name) {
    if (name == "strict" || name == "require_equal") {
        return AlignStrategy::require_equal;
    }
    if (name == "subsample" || name == "subsample_larger") {
        return AlignStrategy::subsample_larger;
    }
    throw ValidationError("unknown align strategy '" + name +
                          "' (expected strict or subsample)");
}

DdOptions make_dd_options(const std::string& align, std::optional<std::uint64_t> seed) {
    DdOptions opts;
    opts.align = align_from_string(align);
    opts.subsample_seed = seed;
    return opts;
}

std::vector<Metric> metrics_from_names(const std::vector<std::string>& names) {
    std::vector<Metric> metrics;
    for (const std::string& name : names) {
        metrics.push_back(metric_from_string(name));
    }
    return metrics;
}

PointFormat format_from_string(const std::string& name) {
    if (name == "csv") return PointFormat::csv;
    if (name == "f64bin") return PointFormat::f64bin;
    throw ValidationError("unknown point format '" + name + "'");
}

py::dict sweep_row_dict(const SweepRow& row) {
    py::dict out;
    out["experiment_id"] = row.experiment_id;
    out["mode_count"] = row.mode_count;
    out["alpha"] = row.alpha;
    out["repetition"] = row.repetition;
    out["seed"] = row.seed;
    out["metric_name"] = row.metric_name;
    out["value"] = row.value;
    return out;
}

} // namespace

PYBIND11_MODULE(dendrodist, m) {
    m.doc() = "Generative-model evaluation via dendrogram distance, with FID and "
              "inception-score baselines";

    py::register_exception<Error>(m, "DendrodistError", PyExc_ValueError);

    py::class_<PointSet>(m, "PointSet")
        .def(py::init([](const Matrix& points,
                         std::optional<std::vector<std::uint32_t>> labels,
                         const std::string& name) {
                 return PointSet(points, std::move(labels), name);
             }),
             py::arg("points"), py::arg("labels") = py::none(), py::arg("name") = "")
        .def_property_readonly("points", &PointSet::points)
        .def_property_readonly("labels",
                               [](const PointSet& self) -> py::object {
                                   if (!self.has_labels()) {
                                       return py::none();
                                   }
                                   return py::cast(self.labels());
                               })
        .def_property_readonly("name", &PointSet::name)
        .def("__len__", &PointSet::size)
        .def_property_readonly("dim", &PointSet::dim);

    py::class_<MergeRecord>(m, "MergeRecord")
        .def_readonly("left_id", &MergeRecord::left_id)
        .def_readonly("right_id", &MergeRecord::right_id)
        .def_readonly("height", &MergeRecord::height)
        .def_readonly("merged_size", &MergeRecord::merged_size);

    py::class_<Dendrogram>(m, "Dendrogram")
        .def_property_readonly("n_leaves", &Dendrogram::n_leaves)
        .def_property_readonly("merges", &Dendrogram::merges)
        .def_property_readonly("agglomerative_distances",
                               &Dendrogram::agglomerative_distances);

    py::class_<UltrametricMatrix>(m, "UltrametricMatrix")
        .def_property_readonly("matrix", &UltrametricMatrix::matrix)
        .def("validate", &UltrametricMatrix::validate);

    py::class_<GaussianFit>(m, "GaussianFit")
        .def(py::init<Vector, Matrix, std::size_t>(), py::arg("mean"),
             py::arg("covariance"), py::arg("sample_count"))
        .def_property_readonly("mean", &GaussianFit::mean)
        .def_property_readonly("covariance", &GaussianFit::covariance)
        .def_property_readonly("sample_count", &GaussianFit::sample_count);

    py::class_<MetricReport>(m, "MetricReport")
        .def_readonly("metric_name", &MetricReport::metric_name)
        .def_readonly("value", &MetricReport::value)
        .def_property_readonly("aux",
                               [](const MetricReport& self) { return json_to_py(self.aux); });

    py::class_<ModeLayout>(m, "ModeLayout")
        .def(py::init<Matrix, double, double>(), py::arg("means"), py::arg("sigma"),
             py::arg("characteristic_length"))
        .def_readonly("means", &ModeLayout::means)
        .def_readonly("sigma", &ModeLayout::sigma)
        .def_readonly("characteristic_length", &ModeLayout::characteristic_length)
        .def_property_readonly("mode_count", &ModeLayout::mode_count);

    py::class_<SweepResult>(m, "SweepResult")
        .def_property_readonly("rows",
                               [](const SweepResult& self) {
                                   py::list out;
                                   for (const SweepRow& row : self.rows()) {
                                       out.append(sweep_row_dict(row));
                                   }
                                   return out;
                               })
        .def_property_readonly("config", [](const SweepResult& self) {
            return json_to_py(self.config());
        });

    py::class_<SummaryRow>(m, "SummaryRow")
        .def_readonly("mode_count", &SummaryRow::mode_count)
        .def_readonly("alpha", &SummaryRow::alpha)
        .def_readonly("metric_name", &SummaryRow::metric_name)
        .def_readonly("mean", &SummaryRow::mean)
        .def_readonly("std", &SummaryRow::stddev)
        .def_readonly("min", &SummaryRow::min)
        .def_readonly("max", &SummaryRow::max)
        .def_readonly("count", &SummaryRow::count);

    // clustering
    m.def("pairwise_distances", &pairwise_distances, py::arg("x"),
          py::arg("max_points") = kDefaultMaxPairwisePoints);
    m.def("single_linkage", &single_linkage, py::arg("dist"));
    m.def("naive_single_linkage", &naive_single_linkage, py::arg("dist"));
    m.def("to_ultrametric", &to_ultrametric, py::arg("dendrogram"));

    // metrics
    m.def("dendrogram_distance", &dendrogram_distance, py::arg("d_a"), py::arg("d_b"));
    m.def("dendrogram_distance_max", &dendrogram_distance_max, py::arg("d_a"),
          py::arg("d_b"));
    m.def(
        "dd_from_pointsets",
        [](const PointSet& x_data, const PointSet& x_model, const std::string& align,
           std::optional<std::uint64_t> seed) {
            return dd_from_pointsets(x_data, x_model, make_dd_options(align, seed));
        },
        py::arg("x_data"), py::arg("x_model"), py::arg("align") = "strict",
        py::arg("seed") = py::none());
    m.def("fit_gaussian", &fit_gaussian, py::arg("x"));
    m.def("matrix_sqrt_psd", &matrix_sqrt_psd, py::arg("c"));
    m.def("frechet_distance", &frechet_distance, py::arg("a"), py::arg("b"));
    m.def(
        "inception_score",
        [](const Matrix& probs, std::size_t splits) {
            const InceptionScore is = inception_score(probs, splits);
            return py::make_tuple(is.mean, is.stddev);
        },
        py::arg("probs"), py::arg("splits") = 1);

    // synthetic data
    m.def("ring_layout", &ring_layout, py::arg("modes") = kDefaultRingModes,
          py::arg("radius") = kDefaultRingRadius, py::arg("sigma") = py::none());
    m.def("grid_layout", &grid_layout, py::arg("modes") = kDefaultGridModes,
          py::arg("length") = kDefaultGridLength, py::arg("sigma") = py::none());
    m.def("perturb_modes", &perturb_modes, py::arg("layout"), py::arg("alpha"),
          py::arg("seed"));
    m.def("sample_dataset",
          py::overload_cast<const ModeLayout&, std::size_t, std::uint64_t>(
              &sample_dataset),
          py::arg("layout"), py::arg("n_per_mode"), py::arg("seed"));
    m.def("sample_dataset_counts",
          py::overload_cast<const ModeLayout&, const std::vector<std::size_t>&,
                            std::uint64_t>(&sample_dataset),
          py::arg("layout"), py::arg("per_mode_counts"), py::arg("seed"));
    m.def(
        "drop_modes",
        [](const PointSet& x, const std::vector<std::uint32_t>& kept_labels,
           std::size_t n_total, std::uint64_t seed) {
            return drop_modes(x, {kept_labels.begin(), kept_labels.end()}, n_total, seed);
        },
        py::arg("x"), py::arg("kept_labels"), py::arg("n_total"), py::arg("seed"));

    // file formats
    m.def(
        "load_points",
        [](const std::filesystem::path& path, std::optional<std::string> format) {
            if (format) {
                return load_points(path, format_from_string(*format));
            }
            return load_points(path);
        },
        py::arg("path"), py::arg("format") = py::none());
    m.def(
        "save_points",
        [](const PointSet& x, const std::filesystem::path& path,
           const std::string& format) { save_points(x, path, format_from_string(format)); },
        py::arg("x"), py::arg("path"), py::arg("format") = "csv");
    m.def("load_probs", &load_probs, py::arg("path"));
    m.def("save_linkage", &save_linkage, py::arg("dendrogram"), py::arg("path"));
    m.def("load_linkage", &load_linkage, py::arg("path"));
    m.def(
        "save_report",
        [](const MetricReport& report, const std::filesystem::path& path,
           const std::string& format) {
            save_report(report, path,
                        format == "json" ? ReportFormat::json : ReportFormat::csv);
        },
        py::arg("report"), py::arg("path"), py::arg("format") = "json");
    m.def(
        "save_sweep",
        [](const SweepResult& result, const std::filesystem::path& path,
           const std::string& format) {
            save_report(result, path,
                        format == "json" ? ReportFormat::json : ReportFormat::csv);
        },
        py::arg("result"), py::arg("path"), py::arg("format") = "csv");
    m.def("load_sweep_csv", &load_sweep_csv, py::arg("path"));

    // experiment harness
    m.def(
        "mode_drop_sweep",
        [](const PointSet& real, const std::vector<std::string>& metrics,
           const std::vector<std::uint32_t>& mode_order, std::size_t n_total,
           std::size_t repetitions, std::uint64_t master_seed) {
            return mode_drop_sweep(real, metrics_from_names(metrics), mode_order,
                                   n_total, repetitions, master_seed);
        },
        py::arg("real"), py::arg("metrics"), py::arg("mode_order"),
        py::arg("n_total"), py::arg("repetitions"), py::arg("master_seed"));
    m.def(
        "noise_sweep",
        [](const std::string& kind, const std::vector<double>& alphas,
           const std::vector<std::string>& metrics, std::size_t n_per_mode,
           std::size_t repetitions, std::uint64_t master_seed,
           std::optional<std::size_t> modes, std::optional<double> scale,
           std::optional<double> sigma) {
            NoiseLayoutParams params;
            params.modes = modes;
            params.scale = scale;
            params.sigma = sigma;
            return noise_sweep(layout_kind_from_string(kind), alphas,
                               metrics_from_names(metrics), n_per_mode, repetitions,
                               master_seed, params);
        },
        py::arg("kind"), py::arg("alphas"), py::arg("metrics"),
        py::arg("n_per_mode") = kDefaultNPerMode, py::arg("repetitions") = 10,
        py::arg("master_seed") = 0, py::arg("modes") = py::none(),
        py::arg("scale") = py::none(), py::arg("sigma") = py::none());
    m.def(
        "checkpoint_series_eval",
        [](const PointSet& real, const std::vector<std::filesystem::path>& paths,
           const std::vector<std::string>& metrics, const std::string& align,
           std::optional<std::uint64_t> seed) {
            return checkpoint_series_eval(real, paths, metrics_from_names(metrics),
                                          make_dd_options(align, seed));
        },
        py::arg("real"), py::arg("checkpoint_paths"), py::arg("metrics"),
        py::arg("align") = "strict", py::arg("seed") = py::none());
    m.def("summarize", &summarize, py::arg("result"));

    m.attr("__version__") = "0.1.0";
    m.attr("RNG_NAME") = kRngName;
    m.attr("RNG_VERSION") = kRngVersion;
}
