#pragma once

#include <filesystem>

#include "dendrodist/sweep_result.hpp"
#include "dendrodist/types.hpp"

namespace dd {

enum class PointFormat { csv, f64bin };
enum class ReportFormat { json, csv };

/// Reads a point set.
///
/// CSV: one row per point, optional header; a final column named "label"
/// (header required for this) holds non-negative integer mode labels.
///
/// f64bin: magic "DDE1", u32-LE n, u32-LE d, u8 has_labels, n*d f64-LE
/// row-major coordinates, then n u32-LE labels when has_labels = 1.
///
/// Non-finite values are rejected with the offending location.
PointSet load_points(const std::filesystem::path& path, PointFormat format);

/// Same, detecting the format by sniffing the f64bin magic bytes.
PointSet load_points(const std::filesystem::path& path);

/// Writes a point set in the formats above. CSV uses round-trip decimal
/// formatting, so save/load is value-exact; f64bin is bit-exact.
void save_points(const PointSet& x, const std::filesystem::path& path,
                 PointFormat format);

/// Reads an n x c class-probability matrix from CSV (optional header).
/// Every row must sum to 1 within 1e-6 with entries in [0, 1]; violations
/// report the row and its sum.
Matrix load_probs(const std::filesystem::path& path);

/// Writes a linkage table: CSV with columns left_id,right_id,height,size,
/// one row per merge in merge order (leaf ids 0..n-1, clusters n..2n-2).
void save_linkage(const Dendrogram& dendro, const std::filesystem::path& path);

/// Reads a linkage table written by save_linkage.
Dendrogram load_linkage(const std::filesystem::path& path);

/// MetricReport as JSON: {"aux": ..., "metric_name": ..., "value": ...}
/// with stable (lexicographic) key order. CSV variant is a single data row
/// metric_name,value,aux with the aux JSON quoted.
void save_report(const MetricReport& report, const std::filesystem::path& path,
                 ReportFormat format);

/// SweepResult as CSV: a "# config: {...}" line carrying the full
/// configuration, a header, then one row per (cell, metric) with columns
/// experiment_id,mode_count,alpha,repetition,seed,metric_name,value.
/// JSON variant is {"config": ..., "rows": [...]}.
void save_report(const SweepResult& result, const std::filesystem::path& path,
                 ReportFormat format);

/// Reads back a MetricReport saved as JSON.
MetricReport load_report_json(const std::filesystem::path& path);

/// Reads back a SweepResult saved as CSV.
SweepResult load_sweep_csv(const std::filesystem::path& path);

/// Summary table as CSV with columns
/// mode_count,alpha,metric_name,mean,std,min,max,n.
void save_summary(const std::vector<SummaryRow>& summary,
                  const std::filesystem::path& path);

/// Shortest decimal representation of v that parses back to the same bits.
std::string format_double(double v);

} // namespace dd
