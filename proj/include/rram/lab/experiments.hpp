#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <vector>

#include "rram/exact/grid.hpp"
#include "rram/exact/random.hpp"
#include "rram/lab/cubes.hpp"
#include "rram/ram/machine.hpp"

namespace rram::lab {

inline constexpr double kZ99 = 2.5758293035489;  // two-sided 99% normal quantile

struct Interval {
  double low = 0, high = 0;
};

/// Wilson score interval for a binomial proportion.
inline Interval wilson(std::uint64_t successes, std::uint64_t n, double z = kZ99) {
  if (n == 0) return {0.0, 1.0};
  double p = static_cast<double>(successes) / static_cast<double>(n);
  double nn = static_cast<double>(n);
  double denom = 1 + z * z / nn;
  double centre = (p + z * z / (2 * nn)) / denom;
  double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// Degree, dimension, coefficient size and polynomial count of a verification algorithm.
struct AlgorithmProfile {
  unsigned d = 1;
  unsigned degree = 1;
  Integer max_coef = 1;
  Integer polys = 1;  // C(n)
};

struct SignFlipConfig {
  Rational delta{1, 2};
  unsigned w = 10;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  unsigned resolution = 64;  // perturbations are drawn on the 2^-resolution lattice
};

struct SignFlipReport {
  std::uint64_t seed = 0, trials = 0, flips = 0;
  double estimate = 0, ci_low = 0, ci_high = 0;
  Rational bound;
  double bound_value = 0;
  bool pass = false;
  std::uint64_t inner_trials = 0, inner_flips = 0;          // snapped into the cell block inside the range cube
  std::uint64_t perimeter_trials = 0, perimeter_flips = 0;  // snapped into a cell crossing its boundary
  std::uint64_t clamped = 0;                                // perturbed points pulled back into [0,1]^d
  double wall_ms = 0;
};

/// 4 * 2^-w * degree * 3^d * (d+1)! / delta.
inline Rational sign_flip_bound(unsigned d, unsigned degree, unsigned w, const Rational& delta) {
  return Rational(4 * Integer(degree) * ipow(3, d) * factorial(d + 1)) * pow2_rational(-static_cast<long>(w)) / delta;
}

inline int quotient_sign(const MultiPoly& p, const MultiPoly& q, const std::vector<Rational>& x) {
  return p.eval(x).sign() * q.eval(x).sign();
}

inline std::vector<Rational> perturb(const std::vector<Rational>& g, const PerturbationConfig& pc, Rng& rng,
                                     std::uint64_t* clamped = nullptr) {
  std::vector<Rational> x(g.size());
  bool any = false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    x[i] = g[i] + sample_offset(pc, rng);
    if (x[i].sign() < 0) {
      x[i] = Rational(0);
      any = true;
    } else if (x[i] > Rational(1)) {
      x[i] = Rational(1);
      any = true;
    }
  }
  if (any && clamped) ++*clamped;
  return x;
}

/// Monte Carlo estimate of Pr[sign(p/q)(g + x) != sign(p/q)(snap(g + x))], x uniform in [-delta/2, delta/2]^d.
inline SignFlipReport sign_flip_probability(const MultiPoly& p, const MultiPoly& q, const std::vector<Rational>& g,
                                            const SignFlipConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  if (q.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "denominator polynomial is identically zero");
  if (p.dimension() != q.dimension() || g.size() != p.dimension())
    throw Error(ErrorKind::ArityMismatch, "p, q and g must share the dimension");
  if (cfg.delta.sign() <= 0) throw Error(ErrorKind::InvalidConfig, "delta must be positive");
  const unsigned d = static_cast<unsigned>(p.dimension());
  const unsigned degree = std::max({p.degree(), q.degree(), 1u});
  PerturbationConfig pc(cfg.delta, cfg.resolution, cfg.seed);
  DyadicGrid grid(cfg.w);
  const Rational half_cell = grid.spacing() / Rational(2), half_delta = cfg.delta / Rational(2);

  SignFlipReport r;
  r.seed = cfg.seed;
  r.trials = cfg.trials;
  for (std::uint64_t t = 0; t < cfg.trials; ++t) {
    Rng rng = Rng::stream(cfg.seed, t);
    std::vector<Rational> gx = perturb(g, pc, rng, &r.clamped);
    std::vector<Rational> gs = snap(gx, grid);
    bool flip = quotient_sign(p, q, gx) != quotient_sign(p, q, gs);
    bool inner = true;
    for (std::size_t i = 0; i < d && inner; ++i)
      inner = gs[i] - half_cell >= g[i] - half_delta && gs[i] + half_cell <= g[i] + half_delta;
    r.flips += flip;
    if (inner) {
      ++r.inner_trials;
      r.inner_flips += flip;
    } else {
      ++r.perimeter_trials;
      r.perimeter_flips += flip;
    }
  }
  r.estimate = cfg.trials ? static_cast<double>(r.flips) / static_cast<double>(cfg.trials) : 0.0;
  Interval ci = wilson(r.flips, cfg.trials);
  r.ci_low = ci.low;
  r.ci_high = ci.high;
  r.bound = sign_flip_bound(d, degree, cfg.w, cfg.delta);
  r.bound_value = r.bound.to_double();
  r.pass = r.ci_high <= r.bound_value;
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// smoothed bit complexity ------------------------------------------------------

struct SmoothedConfig {
  Rational delta{1, 4};
  unsigned wcap = 48;  // largest snapping exponent tried
  std::uint64_t trials = 200;
  std::uint64_t seed = 0;
  unsigned resolution = 64;
};

struct SmoothedReport {
  std::uint64_t seed = 0, trials = 0;
  double estimate = 0;  // mean snapped bit complexity
  double ci_low = 0, ci_high = 0;
  double stddev = 0;
  unsigned max = 0;
  std::uint64_t unresolved = 0;  // trials with no equivalent snap up to wcap (counted as wcap + 1)
  std::uint64_t clamped = 0;
  long bound = 0;
  bool pass = false;
  std::vector<unsigned> samples;
  double wall_ms = 0;
};

/// Mean over uniform perturbations x of snapped_bit_complexity(g + x); the real input is perturbed, words are kept.
inline SmoothedReport smoothed_bit_experiment(const Program& program, const AlgorithmProfile& profile, const Input& g,
                                              const MachineConfig& machine, const SmoothedConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  if (cfg.delta.sign() <= 0) throw Error(ErrorKind::InvalidConfig, "delta must be positive");
  if (cfg.trials == 0) throw Error(ErrorKind::InvalidConfig, "trials must be >= 1");
  PerturbationConfig pc(cfg.delta, cfg.resolution, cfg.seed);
  SmoothedReport r;
  r.seed = cfg.seed;
  r.trials = cfg.trials;
  double sum = 0, sumsq = 0;
  for (std::uint64_t t = 0; t < cfg.trials; ++t) {
    Rng rng = Rng::stream(cfg.seed, t);
    Input gx{perturb(g.reals, pc, rng, &r.clamped), g.words};
    std::optional<unsigned> b = snapped_bit_complexity(program, gx, machine, cfg.wcap);
    unsigned v = b ? *b : cfg.wcap + 1;
    if (!b) ++r.unresolved;
    r.samples.push_back(v);
    r.max = std::max(r.max, v);
    sum += v;
    sumsq += static_cast<double>(v) * v;
  }
  double n = static_cast<double>(cfg.trials);
  r.estimate = sum / n;
  r.stddev = cfg.trials > 1 ? std::sqrt(std::max(0.0, (sumsq - sum * sum / n) / (n - 1))) : 0.0;
  double half = kZ99 * r.stddev / std::sqrt(n);
  r.ci_low = r.estimate - half;
  r.ci_high = r.estimate + half;
  r.bound = expected_bit_bound(profile.d, profile.degree, profile.polys, cfg.delta);
  r.pass = r.unresolved == 0 && r.ci_high <= static_cast<double>(r.bound);
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace rram::lab
