#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dendrodist/errors.hpp"

namespace dd {

/// Generator identity, recorded in output metadata so results can be
/// reproduced from the files alone.
inline constexpr const char* kRngName = "mt19937_64/u53/box-muller";
inline constexpr int kRngVersion = 1;

/// Deterministic random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Uniform and normal variates are mapped here rather than via
/// std distributions, which are implementation-defined: a seed therefore
/// reproduces the same stream on any standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi). Returns exactly lo when lo == hi.
    double uniform(double lo, double hi) {
        return lo + uniform01() * (hi - lo);
    }

    /// Standard normal via Box-Muller; consumes exactly two engine draws.
    double normal() {
        const double u = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
        const double v = uniform01();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(kTwoPi * v);
    }

    double normal(double mean, double stddev) {
        return mean + stddev * normal();
    }

    /// k distinct indices drawn uniformly without replacement from [0, n),
    /// returned in ascending order.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

private:
    static constexpr double kTwoPi = 6.283185307179586476925286766559;
    std::mt19937_64 engine_;
};

/// Mixes a master seed with up to four cell indices into a derived seed.
///
/// Each index must fit in 16 bits; the four indices are packed into one
/// 64-bit word (i0 high, i3 low), xor-ed with the master seed and passed
/// through the splitmix64 finalizer. The finalizer is a bijection on
/// 64-bit values, so for a fixed master seed distinct index tuples always
/// yield distinct derived seeds.
std::uint64_t derive_seed(std::uint64_t master,
                          std::uint64_t i0,
                          std::uint64_t i1 = 0,
                          std::uint64_t i2 = 0,
                          std::uint64_t i3 = 0);

} // namespace dd
