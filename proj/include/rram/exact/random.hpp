#pragma once

#include <cstdint>
#include <random>

#include "rram/exact/rational.hpp"

namespace rram {

/// SplitMix64 finalizer; used to derive independent streams from one master seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seeded generator with exact integer/rational draws.
///
/// The splitting scheme is: stream(master, i) is an mt19937_64 seeded with
/// splitmix64(splitmix64(master) ^ splitmix64(i + 1)). Reports record the
/// master seed only; every trial can be replayed from (master, i).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t master, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(master) ^ splitmix64(index + 1)));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound) for bound >= 1, by rejection on the top bit width.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t mask = ~std::uint64_t{0};
    std::uint64_t top = bound - 1;
    int lead = __builtin_clzll(top);
    mask >>= lead;
    for (;;) {
      std::uint64_t v = next() & mask;
      if (v < bound) return v;
    }
  }

  /// Uniform integer in [lo, hi].
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform in [0, bound) for arbitrary-precision bound >= 1.
  Integer below(const Integer& bound) {
    if (bound <= 1) return Integer(0);
    Integer top = bound - 1;
    std::size_t bits = mpz_sizeinbase(top.get_mpz_t(), 2);
    for (;;) {
      Integer v = 0;
      std::size_t produced = 0;
      while (produced < bits) {
        std::size_t take = std::min<std::size_t>(64, bits - produced);
        std::uint64_t chunk = next();
        if (take < 64) chunk &= (std::uint64_t{1} << take) - 1;
        Integer c(static_cast<unsigned long>(chunk));
        mpz_mul_2exp(v.get_mpz_t(), v.get_mpz_t(), take);
        v += c;
        produced += take;
      }
      if (v < bound) return v;
    }
  }

  bool coin() { return (next() >> 63) != 0; }

  /// Double in [0, 1); only for choosing among discrete options, never for values.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rram
