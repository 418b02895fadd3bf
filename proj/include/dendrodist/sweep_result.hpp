#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dendrodist/types.hpp"

namespace dd {

/// One experiment cell evaluated with one metric. For checkpoint series,
/// mode_count holds the checkpoint index.
struct SweepRow {
    std::string experiment_id;
    std::size_t mode_count;
    double alpha;
    std::size_t repetition;
    std::uint64_t seed;
    std::string metric_name;
    double value;
};

/// Table of per-cell metric values plus the full configuration that
/// produced it, sufficient to re-run the sweep exactly.
class SweepResult {
public:
    SweepResult(std::vector<SweepRow> rows, Json config);

    const std::vector<SweepRow>& rows() const { return rows_; }
    const Json& config() const { return config_; }

private:
    std::vector<SweepRow> rows_;
    Json config_;
};

/// Aggregate of one (mode_count, alpha, metric) cell over its repetitions.
struct SummaryRow {
    std::size_t mode_count;
    double alpha;
    std::string metric_name;
    double mean;
    double stddev; // population std (divide by count)
    double min;
    double max;
    std::size_t count;
};

} // namespace dd
