#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace argosc {

// SplitMix64 finalizer, used to derive independent stream seeds from a base
// seed plus stream labels (column index, replicate index, ...).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(mix64(seed ^ 0x517cc1b727220a95ULL) ^ mix64(a) ^ mix64(mix64(b)));
}

// Purpose tags keeping independently derived stream families disjoint even
// when they share a base seed and running index.
inline constexpr std::uint64_t kNoiseStream = 0x6e6f6973;     // measurement noise, per column
inline constexpr std::uint64_t kBootstrapStream = 0x626f6f74; // resampling, per replicate

// Seedable draws on top of std::mt19937_64. The engine is fully specified by
// the standard; the distributions below are spelled out here because the
// std::*_distribution algorithms are implementation-defined.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; pairs are generated and the spare cached.
    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.28318530717958647692528676655900577 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    // Unbiased integer in [0, bound) (Lemire's multiply-and-reject).
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t x = engine_();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t t = -bound % bound;
            while (lo < t) {
                x = engine_();
                m = static_cast<__uint128_t>(x) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace argosc
