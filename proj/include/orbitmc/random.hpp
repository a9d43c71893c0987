#pragma once

#include <cstdint>
#include <random>

namespace orbitmc {

/// Seeded random stream.
///
/// Everything on top of the raw 64-bit engine (uniform reals, bounded integers)
/// is implemented here rather than through std::*_distribution so that a given
/// seed produces the same stream on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent child stream, a pure function of (master, stream).
    static Rng derive(std::uint64_t master, std::uint64_t stream);

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on {0, ..., n-1}; n >= 1.
    std::uint64_t below(std::uint64_t n);

    /// +1 or -1 with equal probability.
    int sign() { return (next() >> 63) ? 1 : -1; }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace orbitmc
