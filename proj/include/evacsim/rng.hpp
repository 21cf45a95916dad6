#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace evacsim {

// SplitMix64 step, used for seed expansion and substream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic per-purpose seed: mixes a run seed with a stream id so
/// parallel replications and independent draw streams never share state.
inline std::uint64_t derive_seed(std::uint64_t run_seed, std::uint64_t stream_id) {
    std::uint64_t s = run_seed ^ (0x6a09e667f3bcc909ULL + stream_id * 0x517cc1b727220a95ULL);
    return splitmix64(s);
}

// xoshiro256++ generator with explicit sampling helpers. All simulation
// randomness goes through this class so results are reproducible across
// platforms and standard-library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        // Seed expansion per the xoshiro reference recipe.
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
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

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Unbiased integer in [0, n). n must be >= 1.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    /// Exponential with the given rate (mean 1/rate).
    double exponential(double rate) { return -std::log(1.0 - uniform01()) / rate; }

    /// Standard normal via Box-Muller; consumes exactly two uniforms per call.
    double normal() {
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Poisson count. Exact for any mean: counts unit-rate exponential
    /// inter-arrivals, so cost is O(mean) and there is no underflow at
    /// large means (placement draws can reach 1e5).
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        std::uint64_t k = 0;
        double t = exponential(1.0);
        while (t <= mean) {
            ++k;
            t += exponential(1.0);
        }
        return k;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

}  // namespace evacsim
