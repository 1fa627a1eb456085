#pragma once

#include <cstdint>
#include <vector>

#include "rram/exact/random.hpp"
#include "rram/exact/rational.hpp"

namespace rram {

/// The lattice 2^(-w)·Z restricted to [0, 1].
struct DyadicGrid {
  unsigned w = 1;

  explicit DyadicGrid(unsigned word_size) : w(word_size) {
    if (w < 1) throw Error(ErrorKind::InvalidConfig, "grid exponent must be >= 1");
  }

  Rational spacing() const { return pow2_rational(-static_cast<long>(w)); }
};

/// Nearest grid point to x in [0, 1]; exact midpoints round upward.
inline Rational snap(const Rational& x, const DyadicGrid& grid) {
  if (x.sign() < 0 || x > Rational(1))
    throw Error(ErrorKind::OutOfRange, "snap expects a value in [0,1], got " + x.str());
  Integer scale = pow2(grid.w);
  Integer m = floor(x * Rational(scale) + Rational(Integer(1), Integer(2)));
  return Rational(m, scale);
}

inline std::vector<Rational> snap(const std::vector<Rational>& xs, const DyadicGrid& grid) {
  std::vector<Rational> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(snap(x, grid));
  return out;
}

/// Uniform perturbation magnitude delta, sampled on the dyadic lattice 2^(-resolution).
struct PerturbationConfig {
  Rational delta;
  unsigned resolution = 64;
  std::uint64_t seed = 0;

  PerturbationConfig(Rational magnitude, unsigned kappa = 64, std::uint64_t s = 0)
      : delta(std::move(magnitude)), resolution(kappa), seed(s) {
    if (delta.sign() < 0 || delta > Rational(1))
      throw Error(ErrorKind::InvalidConfig, "perturbation magnitude must lie in [0,1]");
    if (resolution < 1) throw Error(ErrorKind::InvalidConfig, "sampling resolution must be >= 1");
  }
};

/// One offset drawn uniformly from the multiples of 2^(-resolution) in [-delta/2, delta/2].
inline Rational sample_offset(const PerturbationConfig& cfg, Rng& rng) {
  if (cfg.delta.is_zero()) return Rational(0);
  Integer scale = pow2(cfg.resolution);
  Rational half = cfg.delta / Rational(2);
  Integer lo = ceil(-half * Rational(scale));
  Integer hi = floor(half * Rational(scale));
  Integer m = lo + rng.below(Integer(hi - lo + 1));
  return Rational(m, scale);
}

}  // namespace rram
