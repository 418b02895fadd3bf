#include "dendrodist/rng.hpp"

#include <numeric>

namespace dd {

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n, std::size_t k) {
    if (k > n) {
        throw ValidationError("sample_without_replacement: cannot draw " +
                              std::to_string(k) + " of " + std::to_string(n));
    }
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    // partial Fisher-Yates: the first k slots end up as the sample
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t remaining = n - i;
        std::size_t offset = static_cast<std::size_t>(uniform01() * static_cast<double>(remaining));
        if (offset >= remaining) {
            offset = remaining - 1;
        }
        std::swap(pool[i], pool[i + offset]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

namespace {

std::uint64_t splitmix64_mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t i0, std::uint64_t i1,
                          std::uint64_t i2, std::uint64_t i3) {
    for (std::uint64_t index : {i0, i1, i2, i3}) {
        if (index > 0xffffULL) {
            throw ValidationError("derive_seed: index " + std::to_string(index) +
                                  " exceeds the 16-bit field limit");
        }
    }
    const std::uint64_t packed = (i0 << 48) | (i1 << 32) | (i2 << 16) | i3;
    return splitmix64_mix(master ^ packed);
}

} // namespace dd
