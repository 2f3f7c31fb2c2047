#pragma once

#include <cstdint>

#include "atm/numeric.hpp"

namespace atm {

// SplitMix64 with an explicit stream discipline: stream(seed, walker) yields
// independent generators, so experiments are bit-reproducible for any thread
// count as long as walkers keep their indices.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static SplitMix64 stream(std::uint64_t seed, std::uint64_t walker) {
    SplitMix64 mix(seed ^ (0x9e3779b97f4a7c15ULL * (walker + 1)));
    mix.next();  // decorrelate nearby walker indices
    return mix;
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_double() { return (next() >> 11) * 0x1.0p-53; }

  // uniform in [0, n), unbiased (rejection sampling)
  std::uint64_t next_below(std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // uniform big integer in [0, n)
  Int next_below(const Int& n) {
    unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(n)) + 1;
    unsigned words = (bits + 63) / 64;
    for (;;) {
      Int r = 0;
      for (unsigned i = 0; i < words; ++i) {
        r <<= 64;
        r |= Int(next());
      }
      r >>= (words * 64 - bits);
      if (r < n) return r;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace atm
