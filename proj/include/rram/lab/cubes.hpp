#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rram/exact/random.hpp"
#include "rram/lab/poly.hpp"

namespace rram::lab {

inline Integer factorial(unsigned n) {
  Integer f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

inline Integer ipow(const Integer& b, unsigned e) {
  Integer r = 1;
  for (unsigned i = 0; i < e; ++i) r *= b;
  return r;
}

inline void require_hitting_hypothesis(unsigned d, unsigned degree, std::uint64_t k) {
  if (d < 1) throw Error(ErrorKind::PreconditionViolated, "dimension must be >= 1");
  if (k < 2ull * degree + 2)
    throw Error(ErrorKind::PreconditionViolated,
                "need k >= 2*degree + 2, got k=" + std::to_string(k) + " degree=" + std::to_string(degree));
}

/// k^(d-1) * degree * 3^d * (d+1)!: cubes of C(d,k) a degree-bounded variety can meet.
inline Integer hitting_bound(unsigned d, unsigned degree, std::uint64_t k) {
  require_hitting_hypothesis(d, degree, k);
  return ipow(Integer(static_cast<unsigned long>(k)), d - 1) * degree * ipow(3, d) * factorial(d + 1);
}

/// f(1) = degree, f(d) = 2 f(d-1) d (k+1) + (2 degree)^d.
inline Integer recursion_bound(unsigned d, unsigned degree, std::uint64_t k) {
  require_hitting_hypothesis(d, degree, k);
  Integer f = degree;
  for (unsigned j = 2; j <= d; ++j)
    f = 2 * f * j * Integer(static_cast<unsigned long>(k + 1)) + ipow(Integer(2 * degree), j);
  return f;
}

/// Component count (2 degree)^d, used for reporting only.
inline Integer component_bound(unsigned d, unsigned degree) { return ipow(Integer(2 * degree), d); }

/// ceil(log2(3^d (d+1)! degree C / delta)) + 3.
inline long expected_bit_bound(unsigned d, unsigned degree, const Integer& polys, const Rational& delta) {
  if (d < 1 || degree < 1 || polys <= 0 || delta.sign() <= 0)
    throw Error(ErrorKind::PreconditionViolated, "expected_bit_bound needs positive arguments");
  Rational x = Rational(ipow(3, d) * factorial(d + 1) * degree * polys) / delta;
  return ceil_log2(x) + 3;
}

// counting ----------------------------------------------------------------------

/// Closed unit segments [j, j+1], j < k, that contain a root of q; q = 0 hits them all.
inline std::vector<bool> segments_hit(const UniPoly& q, std::uint64_t k) {
  std::vector<bool> hit(k, false);
  if (q.is_zero()) {
    hit.assign(k, true);
    return hit;
  }
  if (q.degree() < 1) return hit;
  UniPoly sf = squarefree(q);
  SturmSequence sturm(sf);
  std::vector<bool> zero(k + 1);
  std::vector<int> var(k + 1, 0);
  for (std::uint64_t j = 0; j <= k; ++j) {
    Rational x(static_cast<unsigned long>(j));
    zero[j] = sf.eval(x).is_zero();
    if (!zero[j]) var[j] = sturm.variations(x);
  }
  for (std::uint64_t j = 0; j < k; ++j)
    hit[j] = zero[j] || zero[j + 1] || var[j] - var[j + 1] > 0;
  return hit;
}

struct CubeCount {
  std::uint64_t count = 0;         // certified lower count of closed cubes meeting V(p)
  std::vector<bool> hit;           // flat index z_0 + z_1 k + z_2 k^2 + ...
  std::uint64_t lines = 0;         // grid lines whose restriction was isolated
  std::uint64_t edge_cubes = 0;    // cubes certified by a root on one of their edges
  std::uint64_t sample_cubes = 0;  // cubes certified by a sign change at interior samples
  bool exact = false;              // d = 1: the count is the true count
  std::string method;
};

/// Cubes of C(d,k) whose closure meets V(p). Every reported cube is certified;
/// for d >= 2 a component strictly inside a cube that avoids all edges and samples is missed.
inline CubeCount count_intersected_cubes(const MultiPoly& p, std::uint64_t k) {
  if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "the zero polynomial vanishes on every cube");
  const std::size_t d = p.dimension();
  if (d > 3) throw Error(ErrorKind::DimensionTooLarge, "cube counting supports d <= 3");
  if (k < 1) throw Error(ErrorKind::InvalidConfig, "k must be >= 1");

  CubeCount out;
  std::uint64_t cubes = 1;
  for (std::size_t i = 0; i < d; ++i) cubes *= k;
  out.hit.assign(cubes, false);

  if (d == 1) {
    out.hit = segments_hit(restrict_to_line(p, {Rational(0)}, 0), k);
    out.lines = 1;
    out.exact = true;
    out.method = "sturm isolation on [0,k]";
    for (bool h : out.hit) out.count += h;
    out.edge_cubes = out.count;
    return out;
  }

  auto flat = [&](const std::vector<std::uint64_t>& z) {
    std::uint64_t idx = 0, scale = 1;
    for (std::size_t i = 0; i < d; ++i) {
      idx += z[i] * scale;
      scale *= k;
    }
    return idx;
  };

  // every grid line parallel to an axis, through integer points of [0,k]^d
  for (std::size_t axis = 0; axis < d; ++axis) {
    std::vector<std::uint64_t> c(d, 0);
    for (;;) {
      std::vector<Rational> at(d);
      for (std::size_t i = 0; i < d; ++i) at[i] = Rational(static_cast<unsigned long>(c[i]));
      std::vector<bool> seg = segments_hit(restrict_to_line(p, at, axis), k);
      ++out.lines;
      for (std::uint64_t j = 0; j < k; ++j) {
        if (!seg[j]) continue;
        // the edge is shared by the cubes with z_axis = j and z_i in {c_i - 1, c_i} elsewhere
        std::vector<std::size_t> others;
        for (std::size_t i = 0; i < d; ++i)
          if (i != axis) others.push_back(i);
        for (unsigned mask = 0; mask < (1u << others.size()); ++mask) {
          std::vector<std::uint64_t> z(d);
          z[axis] = j;
          bool inside = true;
          for (std::size_t o = 0; o < others.size(); ++o) {
            std::size_t i = others[o];
            if ((mask >> o) & 1) {
              if (c[i] == 0) inside = false;
              z[i] = c[i] - 1;
            } else {
              if (c[i] == k) inside = false;
              z[i] = c[i];
            }
          }
          if (inside) out.hit[flat(z)] = true;
        }
      }
      // odometer over the fixed coordinates
      std::size_t i = 0;
      for (; i < d; ++i) {
        if (i == axis) continue;
        if (c[i] < k) {
          ++c[i];
          break;
        }
        c[i] = 0;
      }
      if (i == d) break;
    }
  }
  for (bool h : out.hit) out.edge_cubes += h;

  // interior samples at the centre and at {1/4, 3/4}^d; a sign differing from the corner certifies a hit
  std::vector<std::vector<Rational>> offsets;
  offsets.push_back(std::vector<Rational>(d, Rational(1, 2)));
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    std::vector<Rational> o(d);
    for (std::size_t i = 0; i < d; ++i) o[i] = (mask >> i) & 1 ? Rational(3, 4) : Rational(1, 4);
    offsets.push_back(o);
  }
  std::vector<std::uint64_t> z(d, 0);
  for (std::uint64_t idx = 0; idx < cubes; ++idx) {
    std::uint64_t rest = idx;
    for (std::size_t i = 0; i < d; ++i) {
      z[i] = rest % k;
      rest /= k;
    }
    if (out.hit[idx]) continue;
    std::vector<Rational> corner(d);
    for (std::size_t i = 0; i < d; ++i) corner[i] = Rational(static_cast<unsigned long>(z[i]));
    int s0 = p.eval(corner).sign();
    for (const auto& o : offsets) {
      std::vector<Rational> x(d);
      for (std::size_t i = 0; i < d; ++i) x[i] = corner[i] + o[i];
      if (p.eval(x).sign() != s0) {
        out.hit[idx] = true;
        ++out.sample_cubes;
        break;
      }
    }
  }
  for (bool h : out.hit) out.count += h;
  out.method = "sturm isolation on every grid edge + interior sign samples (lower count)";
  return out;
}

/// Random polynomial of total degree exactly `degree`: each monomial is kept with
/// probability 1/2, coefficients are num/den with |value| <= bound and den <= 4.
inline MultiPoly random_poly(Rng& rng, std::size_t d, unsigned degree, long bound = 8) {
  auto coef = [&] {
    for (;;) {
      long den = static_cast<long>(rng.range(1, 4));
      long num = static_cast<long>(rng.range(-bound * den, bound * den));
      if (num != 0) return Rational(Integer(num), Integer(den));
    }
  };
  std::vector<Exponent> monos, top;
  Exponent e(d, 0);
  for (;;) {
    unsigned s = 0;
    for (unsigned x : e) s += x;
    if (s <= degree) {
      monos.push_back(e);
      if (s == degree) top.push_back(e);
    }
    std::size_t i = 0;
    for (; i < d; ++i) {
      if (e[i] < degree) {
        ++e[i];
        break;
      }
      e[i] = 0;
    }
    if (i == d) break;
  }
  MultiPoly p(d);
  p.add_term(top[rng.below(top.size())], coef());
  for (const auto& m : monos)
    if (rng.coin() && !p.terms().count(m)) p.add_term(m, coef());
  return p;
}

/// prod_{j < degree} (x - (j + 1/2)): degree roots in degree distinct unit intervals.
inline MultiPoly tight_univariate(unsigned degree) {
  MultiPoly p = MultiPoly::constant(1, Rational(1));
  for (unsigned j = 0; j < degree; ++j)
    p = p * (MultiPoly::variable(1, 0) - MultiPoly::constant(1, Rational(2 * j + 1, 2)));
  return p;
}

}  // namespace rram::lab
