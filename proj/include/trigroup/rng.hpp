#pragma once

#include <cstdint>
#include <limits>

namespace trigroup {

/// SplitMix64 (Steele, Lea, Flood 2014) used as a counter-based generator:
/// the k-th output is mix64(seed + k * 0x9e3779b97f4a7c15). Every random
/// draw in the library goes through this type, so a seed fully determines
/// a sample on every platform.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        state_ += kGamma;
        return mix64(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept;

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept;

    static constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Stable seed for trial `trial` of grid cell `cell`. Adding cells or
/// trials never changes the seeds of existing (cell, trial) pairs.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t trial) noexcept;

/// Exact Binomial(trials, p) variate via geometric waiting times between
/// successes; expected cost O(trials * min(p, 1 - p)).
std::uint64_t binomial_variate(SplitMix64& rng, std::uint64_t trials, double p);

}  // namespace trigroup
