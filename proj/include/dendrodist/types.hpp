#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dendrodist/errors.hpp"

namespace dd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Json = nlohmann::json;

/// A set of n points in R^d (one row per point), optionally carrying an
/// integer mode/class label per point. All coordinates are 64-bit reals and
/// must be finite; n >= 2 and d >= 1. Immutable after construction.
class PointSet {
public:
    explicit PointSet(Matrix points,
                      std::optional<std::vector<std::uint32_t>> labels = std::nullopt,
                      std::string name = "");

    std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(points_.cols()); }
    const Matrix& points() const { return points_; }
    bool has_labels() const { return labels_.has_value(); }
    const std::vector<std::uint32_t>& labels() const;
    const std::string& name() const { return name_; }

private:
    Matrix points_;
    std::optional<std::vector<std::uint32_t>> labels_;
    std::string name_;
};

/// New point set holding the given rows of `x`, in the given order.
/// Labels, when present, follow their rows.
PointSet select_rows(const PointSet& x, const std::vector<std::size_t>& rows);

/// One agglomeration step: the two clusters joined, the distance at which
/// they joined, and the size of the resulting cluster.
struct MergeRecord {
    std::size_t left_id;
    std::size_t right_id;
    double height;
    std::size_t merged_size;
};

/// Result of a hierarchical clustering over n leaves.
///
/// Leaf ids are 0..n-1; the cluster created by merge i has id n+i, so ids
/// run up to 2n-2. Merge heights are non-decreasing in merge order, and the
/// clustering is a step function of scale (constant between consecutive
/// heights), so the merge list determines the full hierarchy. The sorted
/// merge heights are the agglomerative distances: the n-1 scales at which
/// two branches join.
class Dendrogram {
public:
    Dendrogram(std::size_t n_leaves, std::vector<MergeRecord> merges);

    std::size_t n_leaves() const { return n_leaves_; }
    const std::vector<MergeRecord>& merges() const { return merges_; }

    /// Merge heights sorted ascending; length n_leaves - 1.
    const std::vector<double>& agglomerative_distances() const {
        return agglomerative_distances_;
    }

private:
    std::size_t n_leaves_;
    std::vector<MergeRecord> merges_;
    std::vector<double> agglomerative_distances_;
};

/// Symmetric non-negative matrix with zero diagonal satisfying the strong
/// triangle inequality u(i,k) <= max(u(i,j), u(j,k)).
class UltrametricMatrix {
public:
    /// Validates all invariants, including the O(n^3) strong triangle check.
    explicit UltrametricMatrix(Matrix u);

    std::size_t size() const { return static_cast<std::size_t>(u_.rows()); }
    const Matrix& matrix() const { return u_; }
    double operator()(std::size_t i, std::size_t j) const {
        return u_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    /// Re-runnable full validation (same checks as the public constructor).
    void validate() const;

private:
    struct Trusted {};
    UltrametricMatrix(Matrix u, Trusted);
    friend UltrametricMatrix to_ultrametric(const Dendrogram& dendro);

    void validate_basic() const;

    Matrix u_;
};

/// Mean and unbiased covariance of a point set, as used by the Frechet
/// distance. Covariance must be symmetric within 1e-12 absolute; the PSD
/// eigenvalue tolerance is enforced where the matrix square root is taken.
class GaussianFit {
public:
    GaussianFit(Vector mean, Matrix covariance, std::size_t sample_count);

    std::size_t dim() const { return static_cast<std::size_t>(mean_.size()); }
    const Vector& mean() const { return mean_; }
    const Matrix& covariance() const { return covariance_; }
    std::size_t sample_count() const { return sample_count_; }

private:
    Vector mean_;
    Matrix covariance_;
    std::size_t sample_count_;
};

/// A single metric evaluation plus the provenance needed to reproduce it
/// (sample sizes, seeds, estimator choices, ...). metric_name is one of
/// dd_mean, dd_max, fid, inception_score.
struct MetricReport {
    MetricReport(std::string metric_name_arg, double value_arg,
                 Json aux_arg = Json::object());

    std::string metric_name;
    double value;
    Json aux;
};

} // namespace dd
