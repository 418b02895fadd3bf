#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "dendrodist/metrics.hpp"
#include "dendrodist/sweep_result.hpp"
#include "dendrodist/synthdata.hpp"
#include "dendrodist/types.hpp"

namespace dd {

/// Metrics a sweep can evaluate on a (real, fake) point-set pair.
/// Inception score needs class probabilities, not point sets, so it is
/// evaluated through the eval path rather than sweeps.
enum class Metric { dd_mean, dd_max, fid };

std::string metric_name(Metric m);
Metric metric_from_string(const std::string& name);

enum class LayoutKind { ring, grid };

LayoutKind layout_kind_from_string(const std::string& name);

/// Purpose tags for per-cell seed derivation; the fourth derive_seed index.
/// Cells derive every random stream as
///   derive_seed(master, alpha_index, mode_count, repetition, purpose)
/// so no two cells (or purposes within a cell) share a seed, and cell
/// results are independent of execution order.
enum SeedPurpose : std::uint64_t {
    kSeedPerturb = 0,
    kSeedSampleReal = 1,
    kSeedSampleFake = 2,
    kSeedAlign = 3,
    kSeedDrop = 4,
};

/// Mode-drop experiment: for k = 1..K (prefixes of mode_order) and each
/// repetition, build a fake set that covers only the first k modes via
/// drop_modes and evaluate every metric against the full real set.
/// n_total is the fake-set size and must not exceed the number of points
/// carrying the kept labels at k = 1. An empty mode_order means ascending
/// label order.
SweepResult mode_drop_sweep(const PointSet& real,
                            const std::vector<Metric>& metrics,
                            std::vector<std::uint32_t> mode_order,
                            std::size_t n_total,
                            std::size_t repetitions,
                            std::uint64_t master_seed);

/// Optional overrides for the noise sweep's base layout.
struct NoiseLayoutParams {
    std::optional<std::size_t> modes{};
    std::optional<double> scale{}; // ring radius or grid length
    std::optional<double> sigma{};
};

/// Mode-position stability experiment: for each alpha, mode count k and
/// repetition, perturb the base layout with Unif(-alpha L, alpha L) mode
/// displacements, sample a real set over all K modes and a fake set over
/// the first k modes (same total size, split evenly), and evaluate the
/// metrics. Per-(k, alpha, metric) mean and std follow via summarize().
SweepResult noise_sweep(LayoutKind kind,
                        const std::vector<double>& alphas,
                        const std::vector<Metric>& metrics,
                        std::size_t n_per_mode,
                        std::size_t repetitions,
                        std::uint64_t master_seed,
                        const NoiseLayoutParams& layout_params = {});

/// Evaluates each checkpoint file against a fixed real set, in file order
/// (mode_count holds the checkpoint index). Any unreadable or mismatched
/// checkpoint fails the whole call; no partial results. Size differences
/// are handled per opts.
SweepResult checkpoint_series_eval(const PointSet& real,
                                   const std::vector<std::filesystem::path>& checkpoint_paths,
                                   const std::vector<Metric>& metrics,
                                   const DdOptions& opts);

/// Groups rows by (mode_count, alpha, metric_name) and reduces the
/// repetitions to mean, population std, min, max.
std::vector<SummaryRow> summarize(const SweepResult& result);

} // namespace dd
