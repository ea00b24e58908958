#pragma once

#include <cstdint>
#include <random>

namespace dioph {

/// Derives an independent stream seed from (seed, index). splitmix64 finalizer.
inline uint64_t mix_seed(uint64_t seed, uint64_t index) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Uniform integer in [0, n). Rejection sampling so results do not depend on
/// the standard library's distribution implementation.
inline uint64_t uniform_below(std::mt19937_64& rng, uint64_t n) {
    if (n <= 1) return 0;
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

/// Uniform integer in [lo, hi] inclusive.
inline int64_t uniform_range(std::mt19937_64& rng, int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(uniform_below(rng, static_cast<uint64_t>(hi - lo + 1)));
}

/// Uniform double in [0, 1) with 53 bits of entropy.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace dioph
