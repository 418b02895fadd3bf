// ddeval: generate 2D benchmark data, evaluate generative-model metrics
// (dendrogram distance, FID, inception score) and run experiment sweeps.
//
// Exit codes: 0 success, 1 runtime/data error, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dendrodist/clustering.hpp"
#include "dendrodist/harness.hpp"
#include "dendrodist/ingest.hpp"
#include "dendrodist/metrics.hpp"
#include "dendrodist/rng.hpp"
#include "dendrodist/synthdata.hpp"

namespace fs = std::filesystem;

namespace {

int usage_error(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return 2;
}

int data_error(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return 1;
}

std::vector<dd::Metric> parse_metrics(const std::vector<std::string>& names) {
    std::vector<dd::Metric> metrics;
    for (const std::string& name : names) {
        metrics.push_back(dd::metric_from_string(name));
    }
    return metrics;
}

dd::PointFormat point_format_from_string(const std::string& name) {
    return name == "f64bin" ? dd::PointFormat::f64bin : dd::PointFormat::csv;
}

dd::ReportFormat report_format_from_string(const std::string& name) {
    return name == "json" ? dd::ReportFormat::json : dd::ReportFormat::csv;
}

struct GenArgs {
    std::string kind;
    std::size_t modes = 0; // 0 = default for the kind
    double radius = dd::kDefaultRingRadius;
    double length = dd::kDefaultGridLength;
    double sigma = 0.0; // 0 = default fraction of L
    std::size_t n_per_mode = dd::kDefaultNPerMode;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
};

int run_gen(const GenArgs& args, bool radius_given, bool length_given) {
    dd::ModeLayout layout = [&] {
        const std::optional<double> sigma =
            args.sigma > 0.0 ? std::optional<double>(args.sigma) : std::nullopt;
        if (args.kind == "ring") {
            if (length_given) {
                throw dd::LayoutError("--length applies to --kind grid; use --radius");
            }
            return dd::ring_layout(args.modes == 0 ? dd::kDefaultRingModes : args.modes,
                                   args.radius, sigma);
        }
        if (radius_given) {
            throw dd::LayoutError("--radius applies to --kind ring; use --length");
        }
        return dd::grid_layout(args.modes == 0 ? dd::kDefaultGridModes : args.modes,
                               args.length, sigma);
    }();

    const std::uint64_t perturb_seed = dd::derive_seed(args.seed, 0, 0, 0, dd::kSeedPerturb);
    const std::uint64_t sample_seed =
        dd::derive_seed(args.seed, 0, 0, 0, dd::kSeedSampleReal);
    layout = dd::perturb_modes(layout, args.alpha, perturb_seed);
    const dd::PointSet points = dd::sample_dataset(layout, args.n_per_mode, sample_seed);
    dd::save_points(points, args.out, point_format_from_string(args.format));

    dd::Json means = dd::Json::array();
    for (Eigen::Index i = 0; i < layout.means.rows(); ++i) {
        means.push_back({layout.means(i, 0), layout.means(i, 1)});
    }
    dd::Json sidecar{{"kind", args.kind},
                     {"modes", layout.mode_count()},
                     {"sigma", layout.sigma},
                     {"characteristic_length", layout.characteristic_length},
                     {"alpha", args.alpha},
                     {"seed", args.seed},
                     {"perturb_seed", perturb_seed},
                     {"sample_seed", sample_seed},
                     {"n_per_mode", args.n_per_mode},
                     {"n", points.size()},
                     {"format", args.format},
                     {"generator", {{"name", dd::kRngName}, {"version", dd::kRngVersion}}},
                     {"means", means}};
    sidecar[args.kind == "ring" ? "radius" : "length"] =
        args.kind == "ring" ? args.radius : args.length;
    const fs::path sidecar_path = args.out + ".layout.json";
    std::ofstream side(sidecar_path, std::ios::binary | std::ios::trunc);
    if (!side) {
        throw dd::IoError(sidecar_path.string() + ": cannot open for writing");
    }
    side << sidecar.dump(2) << "\n";

    std::cout << "gen kind=" << args.kind << " modes=" << layout.mode_count()
              << " n=" << points.size() << " out=" << args.out << "\n";
    return 0;
}

struct EvalArgs {
    std::string real;
    std::string fake;
    std::string metric;
    std::string align = "strict";
    std::optional<std::uint64_t> seed;
    std::size_t splits = 1;
    std::string out;
};

int run_eval(const EvalArgs& args) {
    std::optional<dd::MetricReport> report;
    if (args.metric == "is") {
        const dd::Matrix probs = dd::load_probs(args.fake);
        const dd::InceptionScore is = dd::inception_score(probs, args.splits);
        report.emplace("inception_score", is.mean,
                       dd::Json{{"is_std", is.stddev},
                                {"splits", args.splits},
                                {"n", probs.rows()},
                                {"classes", probs.cols()}});
    } else {
        if (args.real.empty()) {
            return usage_error("--real is required for --metric " + args.metric);
        }
        const dd::PointSet real = dd::load_points(args.real);
        const dd::PointSet fake = dd::load_points(args.fake);
        if (args.metric == "fid") {
            const double fid =
                dd::frechet_distance(dd::fit_gaussian(real), dd::fit_gaussian(fake));
            report.emplace("fid", fid,
                           dd::Json{{"n_real", real.size()},
                                    {"n_fake", fake.size()},
                                    {"dim", real.dim()},
                                    {"covariance_estimator", "unbiased"}});
        } else {
            dd::DdOptions opts;
            if (args.align == "subsample") {
                opts.align = dd::AlignStrategy::subsample_larger;
                opts.subsample_seed = args.seed;
            }
            const dd::MetricReport dd_report = dd::dd_from_pointsets(real, fake, opts);
            if (args.metric == "dd") {
                report = dd_report;
            } else { // dd-max
                dd::Json aux = dd_report.aux;
                const double dd_max = aux.at("dd_max").get<double>();
                aux.erase("dd_max");
                aux["dd_mean"] = dd_report.value;
                report.emplace("dd_max", dd_max, std::move(aux));
            }
        }
    }

    std::cout << "metric=" << report->metric_name
              << " value=" << dd::format_double(report->value) << "\n";
    if (!args.out.empty()) {
        dd::save_report(*report, args.out, dd::ReportFormat::json);
    }
    return 0;
}

struct SweepCommonArgs {
    std::vector<std::string> metrics{"dd"};
    std::size_t reps = 10;
    std::uint64_t seed = 0;
    std::string out;
    std::string summary;
    std::string report_format = "csv";
};

int finish_sweep(const dd::SweepResult& result, const SweepCommonArgs& common) {
    dd::save_report(result, common.out, report_format_from_string(common.report_format));
    if (!common.summary.empty()) {
        dd::save_summary(dd::summarize(result), common.summary);
    }
    std::cout << "sweep=" << result.config().at("experiment").get<std::string>()
              << " rows=" << result.rows().size() << " out=" << common.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generative-model evaluation via dendrogram distance"};
    app.require_subcommand(1);

    // gen
    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "Generate a 2D benchmark point set");
    gen->add_option("--kind", gen_args.kind, "Layout kind")
        ->required()
        ->check(CLI::IsMember({"ring", "grid"}));
    gen->add_option("--modes", gen_args.modes, "Mode count (default 7 ring / 9 grid)")
        ->check(CLI::PositiveNumber);
    CLI::Option* radius_opt =
        gen->add_option("--radius", gen_args.radius, "Ring radius (default 50)");
    CLI::Option* length_opt =
        gen->add_option("--length", gen_args.length, "Grid side length (default 100)");
    gen->add_option("--sigma", gen_args.sigma,
                    "Mode standard deviation (default 0.01 * L)");
    gen->add_option("--n-per-mode", gen_args.n_per_mode, "Samples per mode")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    gen->add_option("--alpha", gen_args.alpha,
                    "Mode-position noise scale: Unif(-alpha L, alpha L)")
        ->capture_default_str();
    gen->add_option("--seed", gen_args.seed, "Random seed")->required();
    gen->add_option("--out", gen_args.out, "Output point-set file")->required();
    gen->add_option("--format", gen_args.format, "Output format")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "f64bin"}));

    // eval
    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate one metric on a pair of files");
    eval->add_option("--real", eval_args.real, "Real/reference point-set file");
    eval->add_option("--fake", eval_args.fake,
                     "Generated point-set file (class-probability CSV for --metric is)")
        ->required();
    eval->add_option("--metric", eval_args.metric, "Metric to compute")
        ->required()
        ->check(CLI::IsMember({"dd", "dd-max", "fid", "is"}));
    eval->add_option("--align", eval_args.align,
                     "Sample-count alignment for dd metrics")
        ->capture_default_str()
        ->check(CLI::IsMember({"strict", "subsample"}));
    eval->add_option("--seed", eval_args.seed, "Subsample seed (required for --align subsample)");
    eval->add_option("--splits", eval_args.splits, "Inception-score splits")->capture_default_str();
    eval->add_option("--out", eval_args.out, "Write the full MetricReport JSON here");

    // sweep
    CLI::App* sweep = app.add_subcommand("sweep", "Run an experiment sweep");
    sweep->require_subcommand(1);

    auto add_common = [](CLI::App* cmd, SweepCommonArgs& common, bool seed_required,
                         bool with_reps = true) {
        cmd->add_option("--metrics", common.metrics,
                        "Comma-separated metrics: dd, dd-max, fid")
            ->delimiter(',');
        if (with_reps) {
            cmd->add_option("--reps", common.reps, "Repetitions per cell")
                ->capture_default_str()
                ->check(CLI::PositiveNumber);
        }
        CLI::Option* seed = cmd->add_option("--seed", common.seed, "Master seed");
        if (seed_required) {
            seed->required();
        }
        cmd->add_option("--out", common.out, "Output table file")->required();
        cmd->add_option("--summary", common.summary,
                        "Also write the per-cell mean/std summary CSV here");
        cmd->add_option("--report-format", common.report_format, "Table format")
            ->capture_default_str()
            ->check(CLI::IsMember({"csv", "json"}));
    };

    SweepCommonArgs drop_common;
    std::string drop_real;
    std::size_t drop_n_total = 0;
    std::vector<std::uint32_t> drop_order;
    CLI::App* drop = sweep->add_subcommand(
        "mode-drop", "Sweep the number of modes kept in a labeled real set");
    drop->add_option("--real", drop_real, "Labeled real point-set file")->required();
    drop->add_option("--n-total", drop_n_total,
                     "Fake-set size (default 0 = size of the real set)");
    drop->add_option("--mode-order", drop_order,
                     "Comma-separated label order to keep (default ascending)")
        ->delimiter(',');
    add_common(drop, drop_common, true);

    SweepCommonArgs noise_common;
    std::string noise_kind;
    std::vector<double> noise_alphas{0.0};
    std::size_t noise_modes = 0;
    double noise_radius = 0.0;
    double noise_length = 0.0;
    double noise_sigma = 0.0;
    std::size_t noise_n_per_mode = dd::kDefaultNPerMode;
    CLI::App* noise = sweep->add_subcommand(
        "noise", "Sweep mode counts under mode-position perturbations");
    noise->add_option("--kind", noise_kind, "Layout kind")
        ->required()
        ->check(CLI::IsMember({"ring", "grid"}));
    noise->add_option("--alphas", noise_alphas, "Comma-separated noise scales")
        ->capture_default_str()
        ->delimiter(',');
    noise->add_option("--modes", noise_modes, "Mode count override");
    noise->add_option("--radius", noise_radius, "Ring radius override");
    noise->add_option("--length", noise_length, "Grid length override");
    noise->add_option("--sigma", noise_sigma, "Mode standard deviation override");
    noise->add_option("--n-per-mode", noise_n_per_mode, "Samples per mode")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    add_common(noise, noise_common, true);

    SweepCommonArgs cp_common;
    std::string cp_real;
    std::vector<std::string> cp_paths;
    std::string cp_align = "strict";
    CLI::App* checkpoints = sweep->add_subcommand(
        "checkpoints", "Evaluate a series of sample files against a fixed real set");
    checkpoints->add_option("--real", cp_real, "Real point-set file")->required();
    checkpoints->add_option("--checkpoint", cp_paths,
                            "Checkpoint point-set file (repeatable, in order)")
        ->required();
    checkpoints->add_option("--align", cp_align, "Sample-count alignment")
        ->capture_default_str()
        ->check(CLI::IsMember({"strict", "subsample"}));
    add_common(checkpoints, cp_common, false, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) {
            try {
                return run_gen(gen_args, radius_opt->count() > 0, length_opt->count() > 0);
            } catch (const dd::LayoutError& e) {
                return usage_error(e.what());
            }
        }
        if (eval->parsed()) {
            if (eval_args.align == "subsample" && !eval_args.seed) {
                return usage_error("--align subsample requires --seed");
            }
            return run_eval(eval_args);
        }
        if (drop->parsed()) {
            std::vector<dd::Metric> metrics;
            try {
                metrics = parse_metrics(drop_common.metrics);
            } catch (const dd::ValidationError& e) {
                return usage_error(e.what());
            }
            const dd::PointSet real = dd::load_points(drop_real);
            const std::size_t n_total = drop_n_total == 0 ? real.size() : drop_n_total;
            return finish_sweep(dd::mode_drop_sweep(real, metrics, drop_order, n_total,
                                                    drop_common.reps, drop_common.seed),
                                drop_common);
        }
        if (noise->parsed()) {
            std::vector<dd::Metric> metrics;
            try {
                metrics = parse_metrics(noise_common.metrics);
            } catch (const dd::ValidationError& e) {
                return usage_error(e.what());
            }
            dd::NoiseLayoutParams params;
            if (noise_modes > 0) params.modes = noise_modes;
            if (noise_radius > 0.0) params.scale = noise_radius;
            if (noise_length > 0.0) params.scale = noise_length;
            if (noise_sigma > 0.0) params.sigma = noise_sigma;
            return finish_sweep(
                dd::noise_sweep(dd::layout_kind_from_string(noise_kind), noise_alphas,
                                metrics, noise_n_per_mode, noise_common.reps,
                                noise_common.seed, params),
                noise_common);
        }
        if (checkpoints->parsed()) {
            std::vector<dd::Metric> metrics;
            try {
                metrics = parse_metrics(cp_common.metrics);
            } catch (const dd::ValidationError& e) {
                return usage_error(e.what());
            }
            dd::DdOptions opts;
            if (cp_align == "subsample") {
                if (checkpoints->count("--seed") == 0) {
                    return usage_error("--align subsample requires --seed");
                }
                opts.align = dd::AlignStrategy::subsample_larger;
                opts.subsample_seed = cp_common.seed;
            }
            const dd::PointSet real = dd::load_points(cp_real);
            std::vector<fs::path> paths(cp_paths.begin(), cp_paths.end());
            return finish_sweep(dd::checkpoint_series_eval(real, paths, metrics, opts),
                                cp_common);
        }
    } catch (const dd::Error& e) {
        return data_error(e.what());
    } catch (const std::exception& e) {
        return data_error(e.what());
    }
    return usage_error("no subcommand executed");
}
