#pragma once

#include <cstdint>
#include <initializer_list>

namespace fraclap {

/// SplitMix64 finalizer (Steele, Lea & Flood 2014).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31U);
}

/// Counter-based generator.
///
/// Draw k (k = 0, 1, ...) of the stream keyed by `seed` is
///   splitmix64_mix(seed + (k + 1) * 0x9E3779B97F4A7C15),
/// and a uniform double in [0,1) is the top 53 bits of that word times 2^-53.
/// Sub-streams are obtained with `derive_seed`, which folds each key into the
/// seed through one SplitMix64 round. Any implementation following these two
/// rules reproduces the same streams.
class CounterRng {
public:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    constexpr std::uint64_t next_u64() noexcept {
        ++counter_;
        return splitmix64_mix(seed_ + counter_ * kGolden);
    }

    constexpr double uniform() noexcept {
        return static_cast<double>(next_u64() >> 11U) * 0x1.0p-53;
    }

    [[nodiscard]] constexpr std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] constexpr std::uint64_t position() const noexcept { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

/// Hash a base seed together with an ordered list of keys.
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t h = splitmix64_mix(base + CounterRng::kGolden);
    for (std::uint64_t key : keys) {
        h = splitmix64_mix(h ^ splitmix64_mix(key + CounterRng::kGolden));
    }
    return h;
}

}  // namespace fraclap
