#pragma once

#include <cstdint>
#include <random>

namespace miohint {

using Rng = std::mt19937_64;

// Modulo draw; the bias is irrelevant at the ranges used here and the result
// is stable across standard libraries, unlike the distribution classes.
inline std::uint64_t rand_below(Rng& rng, std::uint64_t n) { return n ? rng() % n : 0; }

inline std::int64_t rand_range(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rand_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

// Uniform in [0,1) with 53 random bits.
inline double rand_unit(Rng& rng) { return (rng() >> 11) * (1.0 / 9007199254740992.0); }

}  // namespace miohint
