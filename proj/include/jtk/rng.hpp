#pragma once

// Deterministic seeded RNG (splitmix64) for reproducible random cochains
// and test data. Not cryptographic; chosen for portability of the exact
// sequence across platforms.

#include "jtk/scalar.hpp"

#include <cstdint>

namespace jtk {

struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  // Small integer in [-range, range].
  long small_int(long range) {
    return (long)below((std::uint64_t)(2 * range + 1)) - range;
  }

  // Scalar with small integer parts; imaginary part only when the field
  // allows it.
  Scalar small_scalar(Field field, long range = 3) {
    Scalar s(small_int(range));
    if (field == Field::Qi) s.im = mpq_class(small_int(range));
    return s;
  }
};

}  // namespace jtk
