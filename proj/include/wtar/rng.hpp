#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace wtar {

/// Deterministic standard-normal sampler on top of mt19937_64.
///
/// Box-Muller over explicitly constructed uniforms, so the draw sequence for
/// a given seed does not depend on the standard library's distribution
/// implementation.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Uniform on (0,1), strictly positive.
    double next_uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
    }

    /// Uniform integer in [0, n).
    std::uint64_t next_index(std::uint64_t n) {
        // rejection-free modulo is fine here: n is tiny relative to 2^64
        return engine_() % n;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Seed for replicate `index` of a study started at `base`.
inline std::uint64_t derived_seed(std::uint64_t base, std::uint64_t index) {
    return base + index;
}

/// splitmix64 finalizer; scrambles a seed into an unrelated stream.
inline std::uint64_t scramble_seed(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace wtar
