#pragma once

#include "wrinkle/rational.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace wf {

// mt19937_64 used through its raw 64-bit output only. The integer-to-rational
// mapping below is fixed so that samples reproduce across standard libraries
// (std::uniform_*_distribution is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    // Uniform integer in [lo, hi] by modular reduction of one raw draw.
    long integer(long lo, long hi);
    // numerator in [-span, span], denominator in [1, max_den], reduced.
    Rational rational(long span = 12, long max_den = 6);
    Rational nonzero_rational(long span = 12, long max_den = 6);

private:
    std::mt19937_64 engine_;
};

// FNV-1a, used to derive per-model streams from the suite seed.
std::uint64_t stable_hash(const std::string& text);
inline Rng derived_rng(std::uint64_t seed, const std::string& label) { return Rng(seed ^ stable_hash(label)); }

}  // namespace wf
