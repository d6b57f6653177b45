#pragma once

#include <cstdint>

#include "edrc/scalar.hpp"

namespace edrc {

// Deterministic RNG with platform-independent output. std::uniform_int_distribution
// is implementation-defined, so draws are done by hand.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform integer in [lo, hi]
    long range(long lo, long hi) {
        if (hi <= lo) return lo;
        return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    Scalar rational(long box) {
        long num = range(-box, box);
        long den = range(1, box);
        return scalar_of(num, den);
    }

  private:
    std::uint64_t state_;
};

}  // namespace edrc
