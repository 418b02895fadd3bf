#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dendrodist/types.hpp"

namespace dd {

enum class AlignStrategy {
    require_equal,    ///< error out when the two sets differ in size
    subsample_larger, ///< seeded uniform subsample (without replacement) of the larger set
};

struct DdOptions {
    AlignStrategy align = AlignStrategy::require_equal;
    /// Required when align == subsample_larger.
    std::optional<std::uint64_t> subsample_seed{};
};

/// Dendrogram distance: mean absolute difference between two sorted
/// agglomerative-distance vectors of equal length. Zero iff the vectors
/// are identical.
double dendrogram_distance(const std::vector<double>& d_a,
                           const std::vector<double>& d_b);

/// Max-form distance between sorted agglomerative-distance vectors; a
/// lower bound on the Gromov-Hausdorff distance between the corresponding
/// ultrametric spaces. Always >= dendrogram_distance on the same pair.
double dendrogram_distance_max(const std::vector<double>& d_a,
                               const std::vector<double>& d_b);

/// End-to-end dendrogram distance between two point sets: equalize sample
/// counts per opts, build both single-linkage dendrograms, compare their
/// agglomerative distances. The report's value is dd_mean; aux records
/// dd_max, sizes, the alignment strategy and seed.
MetricReport dd_from_pointsets(const PointSet& x_data, const PointSet& x_model,
                               const DdOptions& opts = {});

/// Column mean and unbiased (n-1) sample covariance, symmetrized exactly.
GaussianFit fit_gaussian(const PointSet& x);

/// Principal square root of a symmetric PSD matrix via symmetric
/// eigendecomposition; eigenvalues below -1e-10 * lambda_max raise a
/// NotPsdError, anything negative above that is clamped to zero.
Matrix matrix_sqrt_psd(const Matrix& c);

/// Frechet distance between two Gaussians:
///   |mu_a - mu_b|^2 + tr(C_a + C_b - 2 (C_a^{1/2} C_b C_a^{1/2})^{1/2}).
/// Negative results above -1e-6 are numerical noise and clamp to zero.
double frechet_distance(const GaussianFit& a, const GaussianFit& b);

struct InceptionScore {
    double mean;
    double stddev;
};

/// Inception score of an n x c class-probability matrix: for each of
/// `splits` contiguous, equal-as-possible chunks, exp of the mean KL
/// divergence between rows and the chunk's marginal; returns mean and
/// population std over chunks. Rows must sum to 1 within 1e-6.
InceptionScore inception_score(const Matrix& probs, std::size_t splits = 1);

} // namespace dd
