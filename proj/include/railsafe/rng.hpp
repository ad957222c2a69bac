// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace railsafe {

// Finalizing mix of splitmix64 (Vigna). Doubles as the substream
// derivation function so stream seeds are decorrelated from the raw
// master seed.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic splitmix64 engine. Used everywhere instead of <random>
// engines/distributions: identical draw sequences on every platform are
// part of the simulator's reproducibility contract.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double next_double() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, bound); bound must be > 0. Modulo bias is
    // irrelevant for the tiny bounds used here.
    std::uint64_t next_below(std::uint64_t bound) noexcept {
        return next() % bound;
    }

private:
    std::uint64_t state_;
};

// Named rng substreams. A run derives one independent engine per stream
// from the scenario's master seed, so adding draws to one stream never
// perturbs another.
enum class Stream : std::uint64_t {
    Channel = 1,
    SensorNoise = 2,
};

inline SplitMix64 substream(std::uint64_t master_seed, Stream id) noexcept {
    const auto salt = mix64(static_cast<std::uint64_t>(id) * 0x9e3779b97f4a7c15ULL);
    return SplitMix64(mix64(master_seed ^ salt));
}

} // namespace railsafe
