#pragma once

// Deterministic, portable randomness.
//
// The generator is SplitMix64 (Steele, Lea & Flood; the java.util
// SplittableRandom finaliser).  It is seedable, tiny and defined purely in
// terms of 64-bit integer arithmetic, so alternate-language implementations
// reproduce every instance bit-for-bit.  Bounded draws use plain rejection
// sampling as documented on uniform_below().

#include <cstdint>

#include "qfa/fp.hpp"

namespace qfa {

class SplitMix64 {
 public:
  explicit SplitMix64(u64 seed) : state_(seed) {}

  u64 next() {
    u64 z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, n): draw 64-bit words, rejecting values >=
  /// 2^64 - (2^64 mod n), then reduce mod n.
  u64 uniform_below(u64 n) {
    u64 limit = n ? (0ULL - n) - ((0ULL - n) % n) + n : 0;  // largest multiple of n <= 2^64
    // limit == floor(2^64 / n) * n, computed without 128-bit arithmetic:
    // (2^64 - n) - ((2^64 - n) mod n) + n.
    u64 u;
    do {
      u = next();
    } while (u >= limit);
    return u % n;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  int fp_element(int p) { return static_cast<int>(uniform_below(static_cast<u64>(p))); }

  FpVector vector(int p, int n) {
    FpVector v = FpVector::zero(p, n);
    for (int i = 0; i < n; ++i) v.c[static_cast<size_t>(i)] = static_cast<u8>(fp_element(p));
    return v;
  }

  /// Uniform point of the closed unit disc (for 1-bounded complex values),
  /// by rejection from the square [-1,1]^2.
  cplx unit_disc() {
    for (;;) {
      double re = 2.0 * uniform01() - 1.0;
      double im = 2.0 * uniform01() - 1.0;
      if (re * re + im * im <= 1.0) return {re, im};
    }
  }

 private:
  u64 state_;
};

}  // namespace qfa
