#include "dendrodist/synthdata.hpp"

#include <algorithm>
#include <cmath>

#include "dendrodist/rng.hpp"

namespace dd {

ModeLayout::ModeLayout(Matrix means_arg, double sigma_arg,
                       double characteristic_length_arg)
    : means(std::move(means_arg)), sigma(sigma_arg),
      characteristic_length(characteristic_length_arg) {
    if (means.rows() < 1 || means.cols() != 2) {
        throw LayoutError("ModeLayout: means must be a k x 2 matrix with k >= 1, got " +
                          std::to_string(means.rows()) + "x" +
                          std::to_string(means.cols()));
    }
    if (!means.allFinite()) {
        throw LayoutError("ModeLayout: non-finite mode mean");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw LayoutError("ModeLayout: sigma must be positive");
    }
    if (!(characteristic_length > 0.0) || !std::isfinite(characteristic_length)) {
        throw LayoutError("ModeLayout: characteristic length must be positive");
    }
}

ModeLayout ring_layout(std::size_t modes, double radius, std::optional<double> sigma) {
    if (modes < 1) {
        throw LayoutError("ring_layout: need at least one mode");
    }
    if (!(radius > 0.0)) {
        throw LayoutError("ring_layout: radius must be positive");
    }
    Matrix means(static_cast<Eigen::Index>(modes), 2);
    for (std::size_t i = 0; i < modes; ++i) {
        const double angle = 2.0 * M_PI * static_cast<double>(i) /
                             static_cast<double>(modes);
        means(static_cast<Eigen::Index>(i), 0) = radius * std::cos(angle);
        means(static_cast<Eigen::Index>(i), 1) = radius * std::sin(angle);
    }
    const double length = 2.0 * radius; // ring diameter
    return ModeLayout(std::move(means), sigma.value_or(kDefaultSigmaFraction * length),
                      length);
}

ModeLayout grid_layout(std::size_t modes, double length, std::optional<double> sigma) {
    if (modes < 1) {
        throw LayoutError("grid_layout: need at least one mode");
    }
    if (!(length > 0.0)) {
        throw LayoutError("grid_layout: length must be positive");
    }
    const std::size_t side = static_cast<std::size_t>(std::llround(std::sqrt(
        static_cast<double>(modes))));
    if (side * side != modes) {
        throw LayoutError("grid_layout: modes = " + std::to_string(modes) +
                          " is not a perfect square");
    }
    Matrix means(static_cast<Eigen::Index>(modes), 2);
    if (side == 1) {
        means(0, 0) = length / 2.0;
        means(0, 1) = length / 2.0;
    } else {
        const double spacing = length / static_cast<double>(side - 1);
        for (std::size_t gy = 0; gy < side; ++gy) {
            for (std::size_t gx = 0; gx < side; ++gx) {
                const Eigen::Index row = static_cast<Eigen::Index>(gy * side + gx);
                means(row, 0) = spacing * static_cast<double>(gx);
                means(row, 1) = spacing * static_cast<double>(gy);
            }
        }
    }
    return ModeLayout(std::move(means), sigma.value_or(kDefaultSigmaFraction * length),
                      length);
}

ModeLayout perturb_modes(const ModeLayout& layout, double alpha, std::uint64_t seed) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw LayoutError("perturb_modes: alpha must be >= 0");
    }
    const double bound = alpha * layout.characteristic_length;
    Rng rng(seed);
    Matrix means = layout.means;
    for (Eigen::Index i = 0; i < means.rows(); ++i) {
        means(i, 0) += rng.uniform(-bound, bound);
        means(i, 1) += rng.uniform(-bound, bound);
    }
    return ModeLayout(std::move(means), layout.sigma, layout.characteristic_length);
}

PointSet sample_dataset(const ModeLayout& layout, std::size_t n_per_mode,
                        std::uint64_t seed) {
    if (n_per_mode < 1) {
        throw ValidationError("sample_dataset: n_per_mode must be >= 1");
    }
    return sample_dataset(layout,
                          std::vector<std::size_t>(layout.mode_count(), n_per_mode),
                          seed);
}

PointSet sample_dataset(const ModeLayout& layout,
                        const std::vector<std::size_t>& per_mode_counts,
                        std::uint64_t seed) {
    if (per_mode_counts.size() != layout.mode_count()) {
        throw ValidationError("sample_dataset: " +
                              std::to_string(per_mode_counts.size()) +
                              " counts for " + std::to_string(layout.mode_count()) +
                              " modes");
    }
    std::size_t total = 0;
    for (std::size_t c : per_mode_counts) {
        total += c;
    }
    if (total < 2) {
        throw ValidationError("sample_dataset: total sample count must be >= 2, got " +
                              std::to_string(total));
    }

    Matrix points(static_cast<Eigen::Index>(total), 2);
    std::vector<std::uint32_t> labels;
    labels.reserve(total);
    Rng rng(seed);
    Eigen::Index row = 0;
    for (std::size_t mode = 0; mode < layout.mode_count(); ++mode) {
        const double cx = layout.means(static_cast<Eigen::Index>(mode), 0);
        const double cy = layout.means(static_cast<Eigen::Index>(mode), 1);
        for (std::size_t j = 0; j < per_mode_counts[mode]; ++j) {
            points(row, 0) = rng.normal(cx, layout.sigma);
            points(row, 1) = rng.normal(cy, layout.sigma);
            labels.push_back(static_cast<std::uint32_t>(mode));
            ++row;
        }
    }
    return PointSet(std::move(points), std::move(labels), "synthetic");
}

PointSet drop_modes(const PointSet& x, const std::set<std::uint32_t>& kept_labels,
                    std::size_t n_total, std::uint64_t seed) {
    if (!x.has_labels()) {
        throw ValidationError("drop_modes: point set has no labels");
    }
    if (kept_labels.empty()) {
        throw ValidationError("drop_modes: kept_labels is empty");
    }
    const std::vector<std::uint32_t>& labels = x.labels();
    const std::set<std::uint32_t> present(labels.begin(), labels.end());
    for (std::uint32_t kept : kept_labels) {
        if (present.count(kept) == 0) {
            throw ValidationError("drop_modes: label " + std::to_string(kept) +
                                  " does not occur in the point set");
        }
    }

    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (kept_labels.count(labels[i]) > 0) {
            eligible.push_back(i);
        }
    }
    if (n_total > eligible.size()) {
        throw InsufficientSamplesError("drop_modes: requested " +
                                       std::to_string(n_total) + " points but only " +
                                       std::to_string(eligible.size()) +
                                       " carry the kept labels");
    }
    if (n_total < 2) {
        throw ValidationError("drop_modes: n_total must be >= 2");
    }

    Rng rng(seed);
    const std::vector<std::size_t> picks =
        rng.sample_without_replacement(eligible.size(), n_total);
    std::vector<std::size_t> rows;
    rows.reserve(n_total);
    for (std::size_t p : picks) {
        rows.push_back(eligible[p]);
    }
    return select_rows(x, rows);
}

} // namespace dd
