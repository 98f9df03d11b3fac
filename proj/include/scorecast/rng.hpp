#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace scorecast {

/// One step of the splitmix64 sequence; advances `state` and returns the
/// mixed output. Used for seed derivation, not as a bulk generator.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Seed for child stream `index` of a master seed: the index-th output of
/// the splitmix64 sequence started at `master`. Constant time in `index`,
/// so parallel consumers can derive their streams independently.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t state = master + index * 0x9E3779B97F4A7C15ull;
    return splitmix64(state);
}

/// mt19937_64 with portable floating-point draws. The raw engine sequence
/// is pinned by the standard, and the uniform mapping below avoids the
/// implementation-defined std:: distributions, so identical seeds give
/// bit-identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Standard normal via Box-Muller (one value per call, no caching).
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace scorecast
