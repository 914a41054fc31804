// Counter-based splittable RNG.
//
// Every consumer owns an independent stream keyed by (seed, stream id); the
// k-th output of a stream is a pure function of (seed, stream, k).  Loop i of
// a soup draws from stream i regardless of the order in which loops are
// sampled, so parallel sampling reproduces the serial result bit for bit.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace loopsoup {

// SplitMix64 finalizer: a 64-bit avalanche permutation.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix64(mix64(seed + 0x9E3779B97F4A7C15ULL) ^ (stream * 0xD1342543DE82EF95ULL + 1))) {}

    // Independent child stream; used when one stream needs sub-streams.
    Rng split(std::uint64_t substream) const { return Rng(key_, mix64(substream ^ 0xA0761D6478BD642FULL)); }

    std::uint64_t next_u64() { return mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

    // Uniform in [0, 1): top 53 bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + uniform() * (b - a); }

    // Standard normal, Box-Muller; consumes two uniforms per call.
    double gaussian() {
        double u1 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Poisson(mean) by counting exponential arrivals; exact for any mean,
    // O(mean) uniforms per draw.
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        std::uint64_t n = 0;
        double acc = 0.0;
        for (;;) {
            double u = uniform();
            if (u < 1e-300) u = 1e-300;
            acc += -std::log(u);
            if (acc >= mean) return n;
            ++n;
        }
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Stream-id conventions, kept in one place so purposes never collide.
namespace streams {
constexpr std::uint64_t kSoupMeta = 0;            // Poisson count of a soup
constexpr std::uint64_t kLoopBase = 1;            // stream kLoopBase + i for loop i
constexpr std::uint64_t kLatticeBase = 1ULL << 40;  // lattice soup (site, length) buckets
constexpr std::uint64_t kDriving = 2ULL << 40;      // SLE driving paths
}  // namespace streams

// Derives the seed of sample i of a multi-sample experiment from a base seed.
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
    return mix64(mix64(base_seed ^ 0x2545F4914F6CDD1DULL) + index);
}

}  // namespace loopsoup
