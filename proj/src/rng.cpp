#include "trigroup/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace trigroup {

namespace {
__extension__ typedef unsigned __int128 u128;
}

double SplitMix64::uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::uint64_t SplitMix64::below(std::uint64_t bound) noexcept {
    // Lemire's multiply-shift with rejection of the biased low zone.
    auto product = static_cast<u128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            product = static_cast<u128>((*this)()) * bound;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t trial) noexcept {
    std::uint64_t s = SplitMix64::mix64(master + SplitMix64::kGamma);
    s = SplitMix64::mix64(s ^ (cell * 0xd1b54a32d192ed03ULL + 0x8bb84b93962eacc9ULL));
    s = SplitMix64::mix64(s ^ (trial * 0xaef17502108ef2d9ULL + 0x4b6d499041670d8dULL));
    return s;
}

std::uint64_t binomial_variate(SplitMix64& rng, std::uint64_t trials, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("binomial_variate: p must lie in [0, 1]");
    }
    if (trials == 0 || p == 0.0) return 0;
    if (p == 1.0) return trials;
    if (p > 0.5) return trials - binomial_variate(rng, trials, 1.0 - p);

    // Gap to the next success is Geometric(p): floor(log U / log(1 - p)).
    const double log_q = std::log1p(-p);
    std::uint64_t successes = 0;
    std::uint64_t position = 0;  // number of trials consumed so far
    for (;;) {
        const double u = 1.0 - rng.uniform01();  // (0, 1]
        const double gap = std::floor(std::log(u) / log_q);
        if (gap >= static_cast<double>(trials - position)) break;
        position += static_cast<std::uint64_t>(gap) + 1;
        ++successes;
        if (position >= trials) break;
    }
    return successes;
}

}  // namespace trigroup
