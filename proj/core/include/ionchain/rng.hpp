#pragma once

#include <cstdint>

namespace ionchain {

/** SplitMix64 pseudo-random generator (Steele/Lea/Vigna).
    The state update is fully specified in 64-bit integer arithmetic, so a
    given seed produces the identical stream on every platform and compiler.
    All stochastic pieces of the library (disorder draws, multi-start
    perturbations) go through this generator; nothing uses the
    implementation-defined <random> distributions.
*/
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) built from the top 53 bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

private:
    std::uint64_t state_;
};

/// Independent stream seed for (base seed, stream index). Used to give every
/// start / grid point / disorder realization its own reproducible stream.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    SplitMix64 g(base + 0x9e3779b97f4a7c15ULL * (stream + 1));
    return g.next_u64();
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(base, a), b);
}

} // namespace ionchain
