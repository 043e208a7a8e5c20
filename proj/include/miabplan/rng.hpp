#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace miab {

// Deterministic xoshiro256++ stream. Every stochastic component in the
// planner draws from one of these so results are reproducible across
// platforms and standard libraries (std::normal_distribution and friends
// are not bit-stable between implementations).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) {
            word = splitmix64(x);
        }
    }

    // Independent stream keyed by (seed, a, b, c). Used to give each
    // campaign run and each GA offspring its own stream so that thread
    // scheduling cannot change which numbers are drawn.
    static Rng substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
        std::uint64_t h = seed;
        h = mix(h + 0x9E3779B97F4A7C15ULL * (a + 1));
        h = mix(h + 0x9E3779B97F4A7C15ULL * (b + 1));
        h = mix(h + 0x9E3779B97F4A7C15ULL * (c + 1));
        return Rng(h);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n), n >= 1. Lemire's multiply-shift with
    // rejection, so the draw count is data-dependent but the stream is
    // still fully determined by the seed.
    std::uint64_t below(std::uint64_t n) {
        __uint128_t m = static_cast<__uint128_t>(next()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = -n % n;
            while (low < threshold) {
                m = static_cast<__uint128_t>(next()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    int uniform_int(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

    // Standard normal via Box-Muller; draws exactly two uniforms per call.
    double gauss() {
        const double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9E3779B97F4A7C15ULL;
        return mix(x);
    }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace miab
