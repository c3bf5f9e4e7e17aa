#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cegen {

/// Deterministic random source. Doubles are derived from the raw 64-bit
/// stream directly instead of going through std::uniform_real_distribution,
/// whose output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1) with 53 bits of precision.
    double next_double() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        // Modulo bias is irrelevant at the scales used here.
        return eng_() % n;
    }

    /// Derives an independent stream from a seed and a list of salts, so that
    /// per-bug/per-sample streams do not depend on iteration order.
    static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> salts);

private:
    std::mt19937_64 eng_;
};

}  // namespace cegen
