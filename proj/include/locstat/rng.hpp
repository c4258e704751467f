#pragma once

#include <cstdint>
#include <random>

namespace locstat {

/// Deterministic seed mixer for deriving sub-seeds per pipeline stage, so
/// simulation, tuning, and testing never share multiplier streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stage) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stage + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Independent deterministic stream derived from (seed, stream index).
/// Tasks seeded this way give identical results for any thread count.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

} // namespace locstat
