#include "dendrodist/types.hpp"

#include <cmath>
#include <set>

namespace dd {

namespace {

std::string shape_string(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

} // namespace

PointSet::PointSet(Matrix points, std::optional<std::vector<std::uint32_t>> labels,
                   std::string name)
    : points_(std::move(points)), labels_(std::move(labels)), name_(std::move(name)) {
    if (points_.rows() < 2) {
        throw ValidationError("PointSet: need at least 2 points, got " +
                              std::to_string(points_.rows()));
    }
    if (points_.cols() < 1) {
        throw ValidationError("PointSet: need at least 1 dimension, got " +
                              std::to_string(points_.cols()));
    }
    if (!points_.allFinite()) {
        for (Eigen::Index i = 0; i < points_.rows(); ++i) {
            for (Eigen::Index j = 0; j < points_.cols(); ++j) {
                if (!std::isfinite(points_(i, j))) {
                    throw ValidationError("PointSet: non-finite coordinate at row " +
                                          std::to_string(i) + ", column " +
                                          std::to_string(j));
                }
            }
        }
    }
    if (labels_ && labels_->size() != size()) {
        throw ValidationError("PointSet: " + std::to_string(labels_->size()) +
                              " labels for " + std::to_string(size()) + " points");
    }
}

const std::vector<std::uint32_t>& PointSet::labels() const {
    if (!labels_) {
        throw ValidationError("PointSet '" + name_ + "' has no labels");
    }
    return *labels_;
}

PointSet select_rows(const PointSet& x, const std::vector<std::size_t>& rows) {
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(x.dim()));
    std::optional<std::vector<std::uint32_t>> labels;
    if (x.has_labels()) {
        labels.emplace();
        labels->reserve(rows.size());
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= x.size()) {
            throw ValidationError("select_rows: index " + std::to_string(rows[i]) +
                                  " out of range for " + std::to_string(x.size()) +
                                  " points");
        }
        m.row(static_cast<Eigen::Index>(i)) =
            x.points().row(static_cast<Eigen::Index>(rows[i]));
        if (labels) {
            labels->push_back(x.labels()[rows[i]]);
        }
    }
    return PointSet(std::move(m), std::move(labels), x.name());
}

Dendrogram::Dendrogram(std::size_t n_leaves, std::vector<MergeRecord> merges)
    : n_leaves_(n_leaves), merges_(std::move(merges)) {
    if (n_leaves_ < 2) {
        throw ValidationError("Dendrogram: need at least 2 leaves, got " +
                              std::to_string(n_leaves_));
    }
    if (merges_.size() != n_leaves_ - 1) {
        throw ValidationError("Dendrogram: expected " + std::to_string(n_leaves_ - 1) +
                              " merges for " + std::to_string(n_leaves_) +
                              " leaves, got " + std::to_string(merges_.size()));
    }
    const std::size_t total_ids = 2 * n_leaves_ - 1;
    std::vector<char> used(total_ids, 0);
    std::vector<std::size_t> cluster_size(total_ids, 0);
    for (std::size_t i = 0; i < n_leaves_; ++i) {
        cluster_size[i] = 1;
    }
    double previous_height = 0.0;
    agglomerative_distances_.reserve(merges_.size());
    for (std::size_t m = 0; m < merges_.size(); ++m) {
        const MergeRecord& rec = merges_[m];
        const std::size_t created = n_leaves_ + m;
        if (rec.left_id >= created || rec.right_id >= created) {
            throw ValidationError("Dendrogram: merge " + std::to_string(m) +
                                  " references a cluster id not yet created");
        }
        if (rec.left_id == rec.right_id) {
            throw ValidationError("Dendrogram: merge " + std::to_string(m) +
                                  " joins cluster " + std::to_string(rec.left_id) +
                                  " with itself");
        }
        if (used[rec.left_id] || used[rec.right_id]) {
            throw ValidationError("Dendrogram: merge " + std::to_string(m) +
                                  " reuses a cluster id already merged");
        }
        used[rec.left_id] = 1;
        used[rec.right_id] = 1;
        if (!std::isfinite(rec.height) || rec.height < 0.0) {
            throw ValidationError("Dendrogram: merge " + std::to_string(m) +
                                  " has invalid height");
        }
        if (m > 0 && rec.height < previous_height) {
            throw ValidationError("Dendrogram: merge heights decrease at merge " +
                                  std::to_string(m));
        }
        previous_height = rec.height;
        cluster_size[created] = cluster_size[rec.left_id] + cluster_size[rec.right_id];
        if (rec.merged_size != cluster_size[created]) {
            throw ValidationError("Dendrogram: merge " + std::to_string(m) +
                                  " records size " + std::to_string(rec.merged_size) +
                                  ", expected " + std::to_string(cluster_size[created]));
        }
        agglomerative_distances_.push_back(rec.height);
    }
    if (cluster_size[total_ids - 1] != n_leaves_) {
        throw ValidationError("Dendrogram: final merge spans " +
                              std::to_string(cluster_size[total_ids - 1]) + " of " +
                              std::to_string(n_leaves_) + " leaves");
    }
}

UltrametricMatrix::UltrametricMatrix(Matrix u) : u_(std::move(u)) {
    validate();
}

UltrametricMatrix::UltrametricMatrix(Matrix u, Trusted) : u_(std::move(u)) {
    validate_basic();
}

void UltrametricMatrix::validate_basic() const {
    if (u_.rows() != u_.cols() || u_.rows() < 2) {
        throw ValidationError("UltrametricMatrix: expected a square matrix of size >= 2, got " +
                              shape_string(u_));
    }
    for (Eigen::Index i = 0; i < u_.rows(); ++i) {
        if (u_(i, i) != 0.0) {
            throw ValidationError("UltrametricMatrix: nonzero diagonal at index " +
                                  std::to_string(i));
        }
        for (Eigen::Index j = i + 1; j < u_.cols(); ++j) {
            const double v = u_(i, j);
            if (!std::isfinite(v) || v < 0.0) {
                throw ValidationError("UltrametricMatrix: invalid entry at (" +
                                      std::to_string(i) + ", " + std::to_string(j) + ")");
            }
            if (v != u_(j, i)) {
                throw ValidationError("UltrametricMatrix: asymmetry at (" +
                                      std::to_string(i) + ", " + std::to_string(j) + ")");
            }
        }
    }
}

void UltrametricMatrix::validate() const {
    validate_basic();
    const Eigen::Index n = u_.rows();
    const double tol = 1e-12 * std::max(1.0, u_.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index k = 0; k < n; ++k) {
                if (u_(i, k) > std::max(u_(i, j), u_(j, k)) + tol) {
                    throw ValidationError(
                        "UltrametricMatrix: strong triangle inequality violated for (" +
                        std::to_string(i) + ", " + std::to_string(j) + ", " +
                        std::to_string(k) + ")");
                }
            }
        }
    }
}

GaussianFit::GaussianFit(Vector mean, Matrix covariance, std::size_t sample_count)
    : mean_(std::move(mean)), covariance_(std::move(covariance)),
      sample_count_(sample_count) {
    if (mean_.size() < 1) {
        throw ValidationError("GaussianFit: empty mean vector");
    }
    if (covariance_.rows() != covariance_.cols() || covariance_.rows() != mean_.size()) {
        throw ValidationError("GaussianFit: covariance shape " + shape_string(covariance_) +
                              " does not match mean of length " +
                              std::to_string(mean_.size()));
    }
    if (!mean_.allFinite() || !covariance_.allFinite()) {
        throw ValidationError("GaussianFit: non-finite entries");
    }
    const double asymmetry =
        (covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff();
    if (asymmetry > 1e-12) {
        throw ValidationError("GaussianFit: covariance asymmetric by " +
                              std::to_string(asymmetry) + " (limit 1e-12)");
    }
    if (sample_count_ < 1) {
        throw ValidationError("GaussianFit: sample_count must be positive");
    }
}

MetricReport::MetricReport(std::string metric_name_arg, double value_arg, Json aux_arg)
    : metric_name(std::move(metric_name_arg)), value(value_arg), aux(std::move(aux_arg)) {
    static const std::set<std::string> known = {"dd_mean", "dd_max", "fid",
                                                "inception_score"};
    if (known.count(metric_name) == 0) {
        throw ValidationError("MetricReport: unknown metric_name '" + metric_name + "'");
    }
    if (!std::isfinite(value)) {
        throw ValidationError("MetricReport: non-finite value for " + metric_name);
    }
    const double lower = metric_name == "inception_score" ? 1.0 : 0.0;
    if (value < lower) {
        throw ValidationError("MetricReport: " + metric_name + " value " +
                              std::to_string(value) + " below its lower bound " +
                              std::to_string(lower));
    }
    if (!aux.is_object()) {
        throw ValidationError("MetricReport: aux must be a JSON object");
    }
}

} // namespace dd
