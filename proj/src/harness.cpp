#include "dendrodist/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "dendrodist/clustering.hpp"
#include "dendrodist/ingest.hpp"
#include "dendrodist/rng.hpp"

namespace dd {

SweepResult::SweepResult(std::vector<SweepRow> rows, Json config)
    : rows_(std::move(rows)), config_(std::move(config)) {
    std::set<std::tuple<std::size_t, double, std::size_t, std::string>> seen;
    for (const SweepRow& row : rows_) {
        if (!std::isfinite(row.value)) {
            throw ValidationError("SweepResult: non-finite value for metric " +
                                  row.metric_name);
        }
        if (!std::isfinite(row.alpha) || row.alpha < 0.0) {
            throw ValidationError("SweepResult: invalid alpha");
        }
        if (!seen.insert({row.mode_count, row.alpha, row.repetition, row.metric_name})
                 .second) {
            throw ValidationError(
                "SweepResult: duplicate cell (mode_count=" +
                std::to_string(row.mode_count) + ", alpha=" + std::to_string(row.alpha) +
                ", repetition=" + std::to_string(row.repetition) + ", metric=" +
                row.metric_name + ")");
        }
    }
    if (!config_.is_object()) {
        throw ValidationError("SweepResult: config must be a JSON object");
    }
}

std::string metric_name(Metric m) {
    switch (m) {
    case Metric::dd_mean: return "dd_mean";
    case Metric::dd_max: return "dd_max";
    case Metric::fid: return "fid";
    }
    throw ValidationError("metric_name: unknown metric");
}

Metric metric_from_string(const std::string& name) {
    if (name == "dd" || name == "dd_mean") return Metric::dd_mean;
    if (name == "dd-max" || name == "dd_max") return Metric::dd_max;
    if (name == "fid") return Metric::fid;
    throw ValidationError("unknown metric '" + name + "' (expected dd, dd-max or fid)");
}

LayoutKind layout_kind_from_string(const std::string& name) {
    if (name == "ring") return LayoutKind::ring;
    if (name == "grid") return LayoutKind::grid;
    throw ValidationError("unknown layout kind '" + name + "' (expected ring or grid)");
}

namespace {

std::vector<Metric> dedupe_metrics(const std::vector<Metric>& metrics) {
    if (metrics.empty()) {
        throw ValidationError("sweep: at least one metric is required");
    }
    std::vector<Metric> unique;
    for (Metric m : metrics) {
        if (std::find(unique.begin(), unique.end(), m) == unique.end()) {
            unique.push_back(m);
        }
    }
    return unique;
}

Json metrics_to_json(const std::vector<Metric>& metrics) {
    Json out = Json::array();
    for (Metric m : metrics) {
        out.push_back(metric_name(m));
    }
    return out;
}

Json generator_json() {
    return Json{{"name", kRngName}, {"version", kRngVersion}};
}

Json estimators_json() {
    return Json{{"covariance", "unbiased"}, {"std", "population"}};
}

/// Evaluates the requested metrics on one (real, fake) cell. The dd pair is
/// computed once through dd_from_pointsets so both forms share alignment.
std::map<Metric, double> evaluate_pair(const PointSet& real, const PointSet& fake,
                                       const std::vector<Metric>& metrics,
                                       const DdOptions& dd_opts) {
    std::map<Metric, double> values;
    const bool want_dd =
        std::find(metrics.begin(), metrics.end(), Metric::dd_mean) != metrics.end() ||
        std::find(metrics.begin(), metrics.end(), Metric::dd_max) != metrics.end();
    if (want_dd) {
        const MetricReport report = dd_from_pointsets(real, fake, dd_opts);
        values[Metric::dd_mean] = report.value;
        values[Metric::dd_max] = report.aux.at("dd_max").get<double>();
    }
    if (std::find(metrics.begin(), metrics.end(), Metric::fid) != metrics.end()) {
        values[Metric::fid] = frechet_distance(fit_gaussian(real), fit_gaussian(fake));
    }
    return values;
}

DdOptions subsample_on_mismatch(std::uint64_t align_seed) {
    DdOptions opts;
    opts.align = AlignStrategy::subsample_larger;
    opts.subsample_seed = align_seed;
    return opts;
}

} // namespace

SweepResult mode_drop_sweep(const PointSet& real, const std::vector<Metric>& metrics,
                            std::vector<std::uint32_t> mode_order, std::size_t n_total,
                            std::size_t repetitions, std::uint64_t master_seed) {
    if (!real.has_labels()) {
        throw ValidationError("mode_drop_sweep: real set has no labels");
    }
    if (repetitions < 1) {
        throw ValidationError("mode_drop_sweep: repetitions must be >= 1");
    }
    const std::vector<Metric> wanted = dedupe_metrics(metrics);

    std::set<std::uint32_t> present(real.labels().begin(), real.labels().end());
    if (present.size() < 2) {
        throw ValidationError("mode_drop_sweep: real set has fewer than 2 modes");
    }
    if (mode_order.empty()) {
        mode_order.assign(present.begin(), present.end()); // ascending labels
    }
    std::set<std::uint32_t> ordered(mode_order.begin(), mode_order.end());
    if (ordered.size() != mode_order.size()) {
        throw ValidationError("mode_drop_sweep: mode_order has duplicate labels");
    }
    for (std::uint32_t label : mode_order) {
        if (present.count(label) == 0) {
            throw ValidationError("mode_drop_sweep: label " + std::to_string(label) +
                                  " does not occur in the real set");
        }
    }

    const std::size_t mode_total = mode_order.size();
    std::vector<SweepRow> rows;
    rows.reserve(mode_total * repetitions * wanted.size());
    for (std::size_t k = 1; k <= mode_total; ++k) {
        const std::set<std::uint32_t> kept(mode_order.begin(),
                                           mode_order.begin() +
                                               static_cast<std::ptrdiff_t>(k));
        for (std::size_t rep = 0; rep < repetitions; ++rep) {
            const std::uint64_t drop_seed = derive_seed(master_seed, 0, k, rep, kSeedDrop);
            const std::uint64_t align_seed =
                derive_seed(master_seed, 0, k, rep, kSeedAlign);
            const PointSet fake = drop_modes(real, kept, n_total, drop_seed);
            const auto values =
                evaluate_pair(real, fake, wanted, subsample_on_mismatch(align_seed));
            for (Metric m : wanted) {
                rows.push_back({"mode-drop", k, 0.0, rep, drop_seed, metric_name(m),
                                values.at(m)});
            }
        }
    }

    Json config{{"experiment", "mode-drop"},
                {"n_real", real.size()},
                {"dim", real.dim()},
                {"n_total", n_total},
                {"repetitions", repetitions},
                {"master_seed", master_seed},
                {"metrics", metrics_to_json(wanted)},
                {"mode_order", mode_order},
                {"alignment", "subsample_larger on size mismatch"},
                {"generator", generator_json()},
                {"estimators", estimators_json()}};
    return SweepResult(std::move(rows), std::move(config));
}

SweepResult noise_sweep(LayoutKind kind, const std::vector<double>& alphas,
                        const std::vector<Metric>& metrics, std::size_t n_per_mode,
                        std::size_t repetitions, std::uint64_t master_seed,
                        const NoiseLayoutParams& layout_params) {
    if (alphas.empty()) {
        throw ValidationError("noise_sweep: at least one alpha is required");
    }
    for (double alpha : alphas) {
        if (!std::isfinite(alpha) || alpha < 0.0) {
            throw ValidationError("noise_sweep: alpha must be >= 0");
        }
    }
    if (n_per_mode < 1 || repetitions < 1) {
        throw ValidationError("noise_sweep: n_per_mode and repetitions must be >= 1");
    }
    const std::vector<Metric> wanted = dedupe_metrics(metrics);

    const bool is_ring = kind == LayoutKind::ring;
    const std::size_t modes =
        layout_params.modes.value_or(is_ring ? kDefaultRingModes : kDefaultGridModes);
    const double scale =
        layout_params.scale.value_or(is_ring ? kDefaultRingRadius : kDefaultGridLength);
    const ModeLayout base = is_ring ? ring_layout(modes, scale, layout_params.sigma)
                                    : grid_layout(modes, scale, layout_params.sigma);
    const std::size_t mode_total = base.mode_count();
    const std::size_t n_total = mode_total * n_per_mode;
    const std::string experiment_id = is_ring ? "noise-ring" : "noise-grid";

    std::vector<SweepRow> rows;
    rows.reserve(alphas.size() * mode_total * repetitions * wanted.size());
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        for (std::size_t k = 1; k <= mode_total; ++k) {
            for (std::size_t rep = 0; rep < repetitions; ++rep) {
                const std::uint64_t perturb_seed =
                    derive_seed(master_seed, ai, k, rep, kSeedPerturb);
                const ModeLayout placed = perturb_modes(base, alphas[ai], perturb_seed);
                const PointSet real = sample_dataset(
                    placed, n_per_mode, derive_seed(master_seed, ai, k, rep, kSeedSampleReal));

                // fake covers the first k modes with the same total size
                ModeLayout covered(placed.means.topRows(static_cast<Eigen::Index>(k)),
                                   placed.sigma, placed.characteristic_length);
                std::vector<std::size_t> counts(k, n_total / k);
                for (std::size_t i = 0; i < n_total % k; ++i) {
                    ++counts[i];
                }
                const PointSet fake = sample_dataset(
                    covered, counts, derive_seed(master_seed, ai, k, rep, kSeedSampleFake));

                const auto values = evaluate_pair(
                    real, fake, wanted,
                    subsample_on_mismatch(derive_seed(master_seed, ai, k, rep, kSeedAlign)));
                for (Metric m : wanted) {
                    rows.push_back({experiment_id, k, alphas[ai], rep, perturb_seed,
                                    metric_name(m), values.at(m)});
                }
            }
        }
    }

    Json config{{"experiment", experiment_id},
                {"kind", is_ring ? "ring" : "grid"},
                {"modes", mode_total},
                {is_ring ? "radius" : "length", scale},
                {"sigma", base.sigma},
                {"characteristic_length", base.characteristic_length},
                {"alphas", alphas},
                {"n_per_mode", n_per_mode},
                {"fake_size", "constant-total"},
                {"repetitions", repetitions},
                {"master_seed", master_seed},
                {"metrics", metrics_to_json(wanted)},
                {"generator", generator_json()},
                {"estimators", estimators_json()}};
    return SweepResult(std::move(rows), std::move(config));
}

SweepResult checkpoint_series_eval(const PointSet& real,
                                   const std::vector<std::filesystem::path>& checkpoint_paths,
                                   const std::vector<Metric>& metrics,
                                   const DdOptions& opts) {
    if (checkpoint_paths.empty()) {
        throw ValidationError("checkpoint_series_eval: no checkpoint files given");
    }
    if (opts.align == AlignStrategy::subsample_larger && !opts.subsample_seed) {
        throw ValidationError(
            "checkpoint_series_eval: subsample_larger requires a subsample_seed");
    }
    const std::vector<Metric> wanted = dedupe_metrics(metrics);

    std::vector<SweepRow> rows;
    rows.reserve(checkpoint_paths.size() * wanted.size());
    Json paths = Json::array();
    for (std::size_t ci = 0; ci < checkpoint_paths.size(); ++ci) {
        const std::filesystem::path& path = checkpoint_paths[ci];
        paths.push_back(path.string());
        std::optional<PointSet> checkpoint;
        try {
            checkpoint = load_points(path);
        } catch (const Error& e) {
            throw IoError("checkpoint file '" + path.string() +
                          "' could not be loaded: " + e.what());
        }
        if (checkpoint->dim() != real.dim()) {
            throw DimensionError("checkpoint file '" + path.string() + "' has d = " +
                                 std::to_string(checkpoint->dim()) +
                                 " but the real set has d = " +
                                 std::to_string(real.dim()));
        }

        DdOptions cell_opts = opts;
        std::uint64_t row_seed = 0;
        if (opts.align == AlignStrategy::subsample_larger) {
            row_seed = derive_seed(*opts.subsample_seed, ci, 0, 0, kSeedAlign);
            cell_opts.subsample_seed = row_seed;
        }
        const auto values = evaluate_pair(real, *checkpoint, wanted, cell_opts);
        for (Metric m : wanted) {
            rows.push_back({"checkpoints", ci, 0.0, 0, row_seed, metric_name(m),
                            values.at(m)});
        }
    }

    Json config{{"experiment", "checkpoints"},
                {"n_real", real.size()},
                {"dim", real.dim()},
                {"checkpoints", paths},
                {"metrics", metrics_to_json(wanted)},
                {"alignment", opts.align == AlignStrategy::require_equal
                                  ? "require_equal"
                                  : "subsample_larger"},
                {"generator", generator_json()},
                {"estimators", estimators_json()}};
    if (opts.subsample_seed) {
        config["subsample_seed"] = *opts.subsample_seed;
    }
    return SweepResult(std::move(rows), std::move(config));
}

std::vector<SummaryRow> summarize(const SweepResult& result) {
    if (result.rows().empty()) {
        throw ValidationError("summarize: empty sweep result");
    }
    std::map<std::tuple<std::size_t, double, std::string>, std::vector<double>> groups;
    for (const SweepRow& row : result.rows()) {
        groups[{row.mode_count, row.alpha, row.metric_name}].push_back(row.value);
    }
    std::vector<SummaryRow> summary;
    summary.reserve(groups.size());
    for (const auto& [key, values] : groups) {
        SummaryRow row;
        row.mode_count = std::get<0>(key);
        row.alpha = std::get<1>(key);
        row.metric_name = std::get<2>(key);
        row.count = values.size();
        double sum = 0.0;
        row.min = values.front();
        row.max = values.front();
        for (double v : values) {
            sum += v;
            row.min = std::min(row.min, v);
            row.max = std::max(row.max, v);
        }
        row.mean = sum / static_cast<double>(values.size());
        double variance = 0.0;
        for (double v : values) {
            variance += (v - row.mean) * (v - row.mean);
        }
        row.stddev = std::sqrt(variance / static_cast<double>(values.size()));
        summary.push_back(std::move(row));
    }
    return summary;
}

} // namespace dd
