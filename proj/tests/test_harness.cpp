#include <doctest.h>

#include <filesystem>
#include <unistd.h>

#include "dendrodist/harness.hpp"
#include "dendrodist/ingest.hpp"
#include "dendrodist/rng.hpp"
#include "test_helpers.hpp"

using namespace dd;
namespace fs = std::filesystem;
using dd::testing::exactly_equal;
using dd::testing::random_points;

namespace {

struct TempDir {
    TempDir() {
        root = fs::temp_directory_path() /
               ("dendrodist-harness-" + std::to_string(::getpid()));
        fs::create_directories(root);
    }
    ~TempDir() { fs::remove_all(root); }
    fs::path operator/(const std::string& name) const { return root / name; }
    fs::path root;
};

double summary_mean(const std::vector<SummaryRow>& summary, std::size_t mode_count,
                    const std::string& metric) {
    for (const SummaryRow& row : summary) {
        if (row.mode_count == mode_count && row.metric_name == metric) {
            return row.mean;
        }
    }
    FAIL("summary cell not found");
    return 0.0;
}

} // namespace

TEST_CASE("mode_drop_sweep shape, determinism, self-pair") {
    const PointSet real = sample_dataset(ring_layout(3, 10.0), 20, 3); // 60 points
    const std::vector<Metric> metrics{Metric::dd_mean};

    SUBCASE("row counting and ordering") {
        const SweepResult result = mode_drop_sweep(real, metrics, {}, 20, 2, 7);
        CHECK(result.rows().size() == 3 * 2);
        CHECK(result.rows().front().experiment_id == "mode-drop");
        CHECK(result.rows().front().mode_count == 1);
        CHECK(result.rows().back().mode_count == 3);
        CHECK(result.config().at("n_total") == 20);
    }
    SUBCASE("same master seed reproduces the result") {
        const SweepResult a = mode_drop_sweep(real, metrics, {}, 20, 2, 7);
        const SweepResult b = mode_drop_sweep(real, metrics, {}, 20, 2, 7);
        REQUIRE(a.rows().size() == b.rows().size());
        for (std::size_t i = 0; i < a.rows().size(); ++i) {
            CHECK(a.rows()[i].value == b.rows()[i].value);
            CHECK(a.rows()[i].seed == b.rows()[i].seed);
        }
    }
    SUBCASE("keeping all modes with n_total = n gives dd exactly zero") {
        // the k = K cell draws every point, i.e. a permutation of the real set
        const PointSet fake = drop_modes(real, {0, 1, 2}, real.size(), 9);
        CHECK(dd_from_pointsets(real, fake).value == 0.0);
    }
    SUBCASE("n_total beyond the smallest prefix fails fast") {
        CHECK_THROWS_AS(mode_drop_sweep(real, metrics, {}, real.size(), 1, 9),
                        InsufficientSamplesError);
    }
    SUBCASE("cells depend only on their derived seed, not execution order") {
        const std::uint64_t master = 7;
        const SweepResult result = mode_drop_sweep(real, metrics, {}, 20, 2, master);
        // recompute one interior cell in isolation
        const std::size_t k = 2;
        const std::size_t rep = 1;
        const PointSet fake = drop_modes(
            real, {0, 1}, 20, derive_seed(master, 0, k, rep, kSeedDrop));
        DdOptions opts;
        opts.align = AlignStrategy::subsample_larger;
        opts.subsample_seed = derive_seed(master, 0, k, rep, kSeedAlign);
        const double expected = dd_from_pointsets(real, fake, opts).value;
        bool found = false;
        for (const SweepRow& row : result.rows()) {
            if (row.mode_count == k && row.repetition == rep) {
                CHECK(row.value == expected);
                found = true;
            }
        }
        CHECK(found);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(mode_drop_sweep(real, metrics, {}, 20, 0, 1), ValidationError);
        CHECK_THROWS_AS(mode_drop_sweep(real, {}, {}, 20, 1, 1), ValidationError);
        CHECK_THROWS_AS(mode_drop_sweep(real, metrics, {0, 0}, 20, 1, 1),
                        ValidationError);
        CHECK_THROWS_AS(mode_drop_sweep(real, metrics, {9}, 20, 1, 1), ValidationError);
        Matrix unlabeled(4, 2);
        unlabeled << 1, 2, 3, 4, 5, 6, 7, 8;
        CHECK_THROWS_AS(mode_drop_sweep(PointSet(unlabeled), metrics, {}, 2, 1, 1),
                        ValidationError);
    }
}

TEST_CASE("noise_sweep shape and determinism") {
    const std::vector<Metric> metrics{Metric::dd_mean, Metric::fid};
    NoiseLayoutParams small;
    small.modes = 4;

    const SweepResult result =
        noise_sweep(LayoutKind::ring, {0.0, 0.1}, metrics, 15, 2, 11, small);
    CHECK(result.rows().size() == 2 * 4 * 2 * 2); // alphas * modes * reps * metrics
    CHECK(result.config().at("kind") == "ring");
    CHECK(result.config().at("fake_size") == "constant-total");

    const SweepResult again =
        noise_sweep(LayoutKind::ring, {0.0, 0.1}, metrics, 15, 2, 11, small);
    for (std::size_t i = 0; i < result.rows().size(); ++i) {
        CHECK(result.rows()[i].value == again.rows()[i].value);
    }

    SUBCASE("grid id") {
        const SweepResult grid =
            noise_sweep(LayoutKind::grid, {0.0}, {Metric::dd_mean}, 5, 1, 3,
                        NoiseLayoutParams{.modes = 4, .scale = 10.0, .sigma = {}});
        CHECK(grid.rows().front().experiment_id == "noise-grid");
        CHECK(grid.rows().size() == 4);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(noise_sweep(LayoutKind::ring, {}, metrics, 5, 1, 1),
                        ValidationError);
        CHECK_THROWS_AS(noise_sweep(LayoutKind::ring, {-0.5}, metrics, 5, 1, 1),
                        ValidationError);
    }
}

TEST_CASE("checkpoint_series_eval") {
    TempDir dir;
    Rng rng(515);
    const PointSet real(random_points(rng, 60, 2));

    SUBCASE("checkpoint equal to the real set scores zero") {
        const fs::path path = dir / "same.csv";
        save_points(real, path, PointFormat::csv);
        const SweepResult result =
            checkpoint_series_eval(real, {path}, {Metric::dd_mean}, {});
        REQUIRE(result.rows().size() == 1);
        CHECK(result.rows()[0].value == 0.0);
        CHECK(result.rows()[0].experiment_id == "checkpoints");
    }
    SUBCASE("rows follow file order, one per metric") {
        std::vector<fs::path> paths;
        for (int i = 0; i < 3; ++i) {
            const fs::path path = dir / ("cp" + std::to_string(i) + ".csv");
            save_points(PointSet(random_points(rng, 60, 2)), path, PointFormat::csv);
            paths.push_back(path);
        }
        const SweepResult result = checkpoint_series_eval(
            real, paths, {Metric::dd_mean, Metric::fid}, {});
        REQUIRE(result.rows().size() == 6);
        CHECK(result.rows()[0].mode_count == 0);
        CHECK(result.rows()[2].mode_count == 1);
        CHECK(result.rows()[4].mode_count == 2);
    }
    SUBCASE("blended noise-to-real series is non-increasing in dd") {
        // checkpoints mix uniform box noise with ring-like samples
        const PointSet ring = sample_dataset(ring_layout(), 100, 1); // 700 points
        std::vector<fs::path> paths;
        const std::vector<double> noise_fractions{1.0, 0.75, 0.5, 0.25, 0.0};
        for (std::size_t step = 0; step < noise_fractions.size(); ++step) {
            const std::size_t n_noise = static_cast<std::size_t>(
                noise_fractions[step] * static_cast<double>(ring.size()));
            Rng step_rng(900 + step);
            Matrix pts(static_cast<Eigen::Index>(ring.size()), 2);
            const PointSet fresh = sample_dataset(ring_layout(), 100, 200 + step);
            for (std::size_t i = 0; i < ring.size(); ++i) {
                if (i < n_noise) {
                    pts(static_cast<Eigen::Index>(i), 0) = step_rng.uniform(-60.0, 60.0);
                    pts(static_cast<Eigen::Index>(i), 1) = step_rng.uniform(-60.0, 60.0);
                } else {
                    pts.row(static_cast<Eigen::Index>(i)) =
                        fresh.points().row(static_cast<Eigen::Index>(i));
                }
            }
            const fs::path path = dir / ("blend" + std::to_string(step) + ".csv");
            save_points(PointSet(pts), path, PointFormat::csv);
            paths.push_back(path);
        }
        const SweepResult result =
            checkpoint_series_eval(ring, paths, {Metric::dd_mean}, {});
        REQUIRE(result.rows().size() == 5);
        for (std::size_t i = 1; i < result.rows().size(); ++i) {
            CHECK(result.rows()[i].value <= result.rows()[i - 1].value);
        }
    }
    SUBCASE("unreadable checkpoint fails fast naming the file") {
        const fs::path good = dir / "good.csv";
        save_points(real, good, PointFormat::csv);
        const fs::path missing = dir / "missing.csv";
        CHECK_THROWS_WITH_AS(
            checkpoint_series_eval(real, {good, missing}, {Metric::dd_mean}, {}),
            doctest::Contains("missing.csv"), IoError);
    }
    SUBCASE("dimension mismatch names the file") {
        const fs::path bad = dir / "threedee.csv";
        save_points(PointSet(random_points(rng, 60, 3)), bad, PointFormat::csv);
        CHECK_THROWS_AS(checkpoint_series_eval(real, {bad}, {Metric::dd_mean}, {}),
                        DimensionError);
    }
    SUBCASE("size mismatch honours the alignment options") {
        const fs::path small = dir / "small.csv";
        save_points(PointSet(random_points(rng, 30, 2)), small, PointFormat::csv);
        CHECK_THROWS_AS(checkpoint_series_eval(real, {small}, {Metric::dd_mean}, {}),
                        AlignmentError);
        DdOptions opts;
        opts.align = AlignStrategy::subsample_larger;
        opts.subsample_seed = 5;
        CHECK_NOTHROW(checkpoint_series_eval(real, {small}, {Metric::dd_mean}, opts));
    }
}

TEST_CASE("summarize") {
    SUBCASE("hand-built rows") {
        std::vector<SweepRow> rows{
            {"mode-drop", 1, 0.0, 0, 1, "dd_mean", 1.0},
            {"mode-drop", 1, 0.0, 1, 2, "dd_mean", 3.0},
            {"mode-drop", 2, 0.0, 0, 3, "dd_mean", 5.0},
        };
        const auto summary = summarize(SweepResult(rows, Json::object()));
        REQUIRE(summary.size() == 2);
        CHECK(summary[0].mode_count == 1);
        CHECK(summary[0].mean == 2.0);
        CHECK(summary[0].stddev == 1.0); // population std of {1, 3}
        CHECK(summary[0].min == 1.0);
        CHECK(summary[0].max == 3.0);
        CHECK(summary[0].count == 2);
        CHECK(summary[1].mode_count == 2);
        CHECK(summary[1].stddev == 0.0); // single repetition
    }
    SUBCASE("constant values have zero spread") {
        std::vector<SweepRow> rows;
        for (std::size_t rep = 0; rep < 4; ++rep) {
            rows.push_back({"noise-ring", 3, 0.1, rep, rep, "fid", 2.5});
        }
        const auto summary = summarize(SweepResult(rows, Json::object()));
        REQUIRE(summary.size() == 1);
        CHECK(summary[0].mean == 2.5);
        CHECK(summary[0].stddev == 0.0);
    }
    SUBCASE("empty result is rejected") {
        CHECK_THROWS_AS(summarize(SweepResult({}, Json::object())),
                        ValidationError);
    }
}

TEST_CASE("SweepResult rejects duplicate cells and non-finite values") {
    std::vector<SweepRow> duplicate{
        {"mode-drop", 1, 0.0, 0, 1, "dd_mean", 1.0},
        {"mode-drop", 1, 0.0, 0, 2, "dd_mean", 2.0},
    };
    CHECK_THROWS_AS(SweepResult(duplicate, Json::object()), ValidationError);

    std::vector<SweepRow> invalid{
        {"mode-drop", 1, 0.0, 0, 1, "dd_mean",
         std::numeric_limits<double>::quiet_NaN()},
    };
    CHECK_THROWS_AS(SweepResult(invalid, Json::object()), ValidationError);
}

TEST_CASE("mode drop trend appears on a small ring") {
    const PointSet real = sample_dataset(ring_layout(), 40, 17); // 280 points
    const SweepResult result =
        mode_drop_sweep(real, {Metric::dd_mean}, {}, 40, 3, 23);
    const auto summary = summarize(result);
    const double at_one = summary_mean(summary, 1, "dd_mean");
    const double at_seven = summary_mean(summary, 7, "dd_mean");
    CHECK(at_seven < at_one);
}
