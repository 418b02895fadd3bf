#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "dendrodist/types.hpp"

namespace dd {

inline constexpr std::size_t kDefaultRingModes = 7;
inline constexpr double kDefaultRingRadius = 50.0;
inline constexpr std::size_t kDefaultGridModes = 9;
inline constexpr double kDefaultGridLength = 100.0;
inline constexpr std::size_t kDefaultNPerMode = 100;
/// Default mode standard deviation, as a fraction of the characteristic length.
inline constexpr double kDefaultSigmaFraction = 0.01;

/// Placement of k isotropic Gaussian modes in the plane. The
/// characteristic length L (ring diameter or grid side) sets the scale of
/// mode-position perturbations.
struct ModeLayout {
    ModeLayout(Matrix means_arg, double sigma_arg, double characteristic_length_arg);

    Matrix means;                 // k x 2 mode centers
    double sigma;                 // per-mode isotropic std deviation
    double characteristic_length; // L

    std::size_t mode_count() const { return static_cast<std::size_t>(means.rows()); }
};

/// Modes evenly spaced on an origin-centered circle, mode 0 at angle zero.
/// L = 2 * radius. sigma defaults to kDefaultSigmaFraction * L.
ModeLayout ring_layout(std::size_t modes = kDefaultRingModes,
                       double radius = kDefaultRingRadius,
                       std::optional<double> sigma = std::nullopt);

/// Modes on an m x m lattice spanning [0, length]^2 (modes must be a
/// perfect square m^2; for m = 1 the single mode sits at the center).
/// L = length. sigma defaults to kDefaultSigmaFraction * L.
ModeLayout grid_layout(std::size_t modes = kDefaultGridModes,
                       double length = kDefaultGridLength,
                       std::optional<double> sigma = std::nullopt);

/// Displaces every mode mean by an independent 2D offset with each
/// coordinate drawn from Unif(-alpha*L, alpha*L). alpha = 0 is exactly the
/// identity. sigma and L are unchanged.
ModeLayout perturb_modes(const ModeLayout& layout, double alpha, std::uint64_t seed);

/// n_per_mode isotropic normal draws per mode, labeled by mode index,
/// ordered mode-major. Deterministic in (layout, n_per_mode, seed).
PointSet sample_dataset(const ModeLayout& layout, std::size_t n_per_mode,
                        std::uint64_t seed);

/// Same, with an explicit per-mode sample count (counts.size() must equal
/// the layout's mode count).
PointSet sample_dataset(const ModeLayout& layout,
                        const std::vector<std::size_t>& per_mode_counts,
                        std::uint64_t seed);

/// Simulates a generator that covers only some modes: a uniform sample
/// without replacement of n_total points among those whose label is in
/// kept_labels. Labels are preserved.
PointSet drop_modes(const PointSet& x, const std::set<std::uint32_t>& kept_labels,
                    std::size_t n_total, std::uint64_t seed);

} // namespace dd
