#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace bergm {

/**
 * Seedable 64-bit Mersenne Twister with explicitly specified bounded-integer
 * and unit-interval draws, so a seed reproduces the same stream on every
 * standard library (std::uniform_*_distribution is implementation-defined).
 */
class Rng {
public:
    __extension__ using u128 = unsigned __int128;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        // Lemire's multiply-shift with rejection.
        u128 product = static_cast<u128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(product);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                product = static_cast<u128>(next()) * bound;
                low = static_cast<std::uint64_t>(product);
            }
        }
        return static_cast<std::uint64_t>(product >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// Independent seed for sub-stream `stream` of `seed` (splitmix64 finalizer).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed for parallel chain `chain` of a run seeded with `seed`.
constexpr std::uint64_t chain_seed(std::uint64_t seed, std::size_t chain) noexcept {
    return seed ^ static_cast<std::uint64_t>(chain);
}

} // namespace bergm
