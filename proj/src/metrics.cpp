#include "dendrodist/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "dendrodist/clustering.hpp"
#include "dendrodist/rng.hpp"

namespace dd {

namespace {

void validate_sorted_distances(const std::vector<double>& d, const char* which) {
    if (d.empty()) {
        throw ValidationError(std::string("dendrogram_distance: ") + which +
                              " is empty");
    }
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (!std::isfinite(d[i]) || d[i] < 0.0) {
            throw ValidationError(std::string("dendrogram_distance: ") + which +
                                  " has an invalid entry at index " + std::to_string(i));
        }
        if (i > 0 && d[i] < d[i - 1]) {
            throw ValidationError(std::string("dendrogram_distance: ") + which +
                                  " is not sorted ascending at index " +
                                  std::to_string(i));
        }
    }
}

void check_aligned(const std::vector<double>& d_a, const std::vector<double>& d_b) {
    validate_sorted_distances(d_a, "d_a");
    validate_sorted_distances(d_b, "d_b");
    if (d_a.size() != d_b.size()) {
        throw AlignmentError("dendrogram_distance: vectors have lengths " +
                             std::to_string(d_a.size()) + " and " +
                             std::to_string(d_b.size()) +
                             "; equalize sample counts first, e.g. dd_from_pointsets "
                             "with align = subsample_larger");
    }
}

} // namespace

double dendrogram_distance(const std::vector<double>& d_a,
                           const std::vector<double>& d_b) {
    check_aligned(d_a, d_b);
    double sum = 0.0;
    for (std::size_t i = 0; i < d_a.size(); ++i) {
        sum += std::abs(d_a[i] - d_b[i]);
    }
    return sum / static_cast<double>(d_a.size());
}

double dendrogram_distance_max(const std::vector<double>& d_a,
                               const std::vector<double>& d_b) {
    check_aligned(d_a, d_b);
    double worst = 0.0;
    for (std::size_t i = 0; i < d_a.size(); ++i) {
        worst = std::max(worst, std::abs(d_a[i] - d_b[i]));
    }
    return worst;
}

MetricReport dd_from_pointsets(const PointSet& x_data, const PointSet& x_model,
                               const DdOptions& opts) {
    if (x_data.dim() != x_model.dim()) {
        throw DimensionError("dd_from_pointsets: x_data has d = " +
                             std::to_string(x_data.dim()) + " but x_model has d = " +
                             std::to_string(x_model.dim()));
    }
    if (opts.align == AlignStrategy::subsample_larger && !opts.subsample_seed) {
        throw ValidationError(
            "dd_from_pointsets: subsample_larger requires a subsample_seed");
    }

    const PointSet* a = &x_data;
    const PointSet* b = &x_model;
    std::optional<PointSet> subsampled_set;
    bool subsampled = false;
    if (x_data.size() != x_model.size()) {
        if (opts.align == AlignStrategy::require_equal) {
            throw AlignmentError("dd_from_pointsets: sample counts differ (" +
                                 std::to_string(x_data.size()) + " vs " +
                                 std::to_string(x_model.size()) +
                                 "); pass align = subsample_larger to equalize");
        }
        const bool model_is_larger = x_model.size() > x_data.size();
        const PointSet& larger = model_is_larger ? x_model : x_data;
        const std::size_t target = std::min(x_data.size(), x_model.size());
        Rng rng(*opts.subsample_seed);
        subsampled_set = select_rows(larger,
                                     rng.sample_without_replacement(larger.size(), target));
        (model_is_larger ? b : a) = &*subsampled_set;
        subsampled = true;
    }

    const Dendrogram dendro_a = single_linkage(pairwise_distances(*a));
    const Dendrogram dendro_b = single_linkage(pairwise_distances(*b));
    const double value = dendrogram_distance(dendro_a.agglomerative_distances(),
                                             dendro_b.agglomerative_distances());
    const double value_max = dendrogram_distance_max(dendro_a.agglomerative_distances(),
                                                     dendro_b.agglomerative_distances());

    Json aux{
        {"align_strategy", opts.align == AlignStrategy::require_equal
                               ? "require_equal"
                               : "subsample_larger"},
        {"dd_max", value_max},
        {"distance_metric", "euclidean"},
        {"n_data", x_data.size()},
        {"n_model", x_model.size()},
        {"n_used", a->size()},
        {"subsampled", subsampled},
    };
    if (opts.subsample_seed) {
        aux["subsample_seed"] = *opts.subsample_seed;
    }
    return MetricReport("dd_mean", value, std::move(aux));
}

GaussianFit fit_gaussian(const PointSet& x) {
    const std::size_t n = x.size();
    if (n < 2) {
        throw InsufficientSamplesError("fit_gaussian: need at least 2 samples, got " +
                                       std::to_string(n));
    }
    const Matrix& p = x.points();
    const Vector mean = p.colwise().mean().transpose();
    const Matrix centered = p.rowwise() - mean.transpose();
    Matrix cov = (centered.adjoint() * centered) / static_cast<double>(n - 1);
    cov = ((cov + cov.transpose()) * 0.5).eval();
    return GaussianFit(mean, std::move(cov), n);
}

Matrix matrix_sqrt_psd(const Matrix& c) {
    if (c.rows() != c.cols() || c.rows() < 1) {
        throw ValidationError("matrix_sqrt_psd: expected a square matrix, got " +
                              std::to_string(c.rows()) + "x" + std::to_string(c.cols()));
    }
    const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
    const double asymmetry = (c - c.transpose()).cwiseAbs().maxCoeff();
    if (asymmetry > 1e-10 * scale) {
        throw ValidationError("matrix_sqrt_psd: matrix asymmetric by " +
                              std::to_string(asymmetry));
    }
    const Matrix symmetric = (c + c.transpose()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric);
    if (solver.info() != Eigen::Success) {
        throw Error("matrix_sqrt_psd: eigendecomposition failed");
    }
    Vector eigenvalues = solver.eigenvalues();
    const double largest = eigenvalues.maxCoeff();
    const double floor = -1e-10 * std::max(largest, 0.0);
    if (eigenvalues.minCoeff() < floor) {
        throw NotPsdError("matrix_sqrt_psd: eigenvalue " +
                          std::to_string(eigenvalues.minCoeff()) +
                          " is below the PSD tolerance " + std::to_string(floor));
    }
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        eigenvalues(i) = std::sqrt(std::max(eigenvalues(i), 0.0));
    }
    Matrix root = solver.eigenvectors() * eigenvalues.asDiagonal() *
                  solver.eigenvectors().transpose();
    return ((root + root.transpose()) * 0.5).eval();
}

double frechet_distance(const GaussianFit& a, const GaussianFit& b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("frechet_distance: fits have dimensions " +
                             std::to_string(a.dim()) + " and " +
                             std::to_string(b.dim()));
    }
    const Matrix sqrt_a = matrix_sqrt_psd(a.covariance());
    Matrix inner = sqrt_a * b.covariance() * sqrt_a;
    inner = ((inner + inner.transpose()) * 0.5).eval();
    const Matrix cross = matrix_sqrt_psd(inner);
    double value = (a.mean() - b.mean()).squaredNorm() + a.covariance().trace() +
                   b.covariance().trace() - 2.0 * cross.trace();
    if (value < 0.0) {
        if (value <= -1e-6) {
            throw Error("frechet_distance: value " + std::to_string(value) +
                        " is negative beyond numerical tolerance");
        }
        value = 0.0;
    }
    return value;
}

InceptionScore inception_score(const Matrix& probs, std::size_t splits) {
    const std::size_t n = static_cast<std::size_t>(probs.rows());
    const std::size_t classes = static_cast<std::size_t>(probs.cols());
    if (n < 1 || classes < 1) {
        throw ValidationError("inception_score: empty probability matrix");
    }
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < probs.cols(); ++j) {
            const double p = probs(i, j);
            if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
                throw ValidationError("inception_score: row " + std::to_string(i) +
                                      " has an entry outside [0, 1]");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-6) {
            throw ValidationError("inception_score: row " + std::to_string(i) +
                                  " sums to " + std::to_string(sum) +
                                  " (must be 1 within 1e-6)");
        }
    }
    if (splits < 1 || splits > n) {
        throw ValidationError("inception_score: splits = " + std::to_string(splits) +
                              " out of range [1, " + std::to_string(n) + "]");
    }

    // equal-as-possible contiguous chunks; the first n % splits get one extra
    const std::size_t base = n / splits;
    const std::size_t extra = n % splits;
    std::vector<double> scores;
    scores.reserve(splits);
    std::size_t start = 0;
    for (std::size_t s = 0; s < splits; ++s) {
        const std::size_t len = base + (s < extra ? 1 : 0);
        const auto chunk = probs.middleRows(static_cast<Eigen::Index>(start),
                                            static_cast<Eigen::Index>(len));
        const Eigen::RowVectorXd marginal = chunk.colwise().mean();
        double kl_sum = 0.0;
        for (Eigen::Index i = 0; i < chunk.rows(); ++i) {
            for (Eigen::Index j = 0; j < chunk.cols(); ++j) {
                const double p = chunk(i, j);
                if (p > 0.0) {
                    kl_sum += p * std::log(p / marginal(j));
                }
            }
        }
        // KL is non-negative; clear accumulated floating-point noise
        const double mean_kl = std::max(kl_sum / static_cast<double>(len), 0.0);
        scores.push_back(std::exp(mean_kl));
        start += len;
    }

    double mean = 0.0;
    for (double s : scores) {
        mean += s;
    }
    mean /= static_cast<double>(scores.size());
    double variance = 0.0;
    for (double s : scores) {
        variance += (s - mean) * (s - mean);
    }
    variance /= static_cast<double>(scores.size());
    return {mean, std::sqrt(variance)};
}

} // namespace dd
