#pragma once

#include <string>
#include <vector>

#include "rram/etr/formula.hpp"

namespace rram::etr {

// Variable names. Every name family has a distinct prefix, so names never collide.
namespace names {
inline std::string W(std::uint64_t i, std::uint64_t t) { return "W_" + std::to_string(i) + "_" + std::to_string(t); }
inline std::string R(std::uint64_t i, std::uint64_t t) { return "R_" + std::to_string(i) + "_" + std::to_string(t); }
inline std::string pc(std::uint64_t t) { return "pc_" + std::to_string(t); }
inline std::string pow2(unsigned b) { return "p2_" + std::to_string(b); }
inline std::string bit(const std::string& owner, unsigned b) { return "bit_" + owner + "_" + std::to_string(b); }
/// Per-site temporary: kind in {z, u, l, q, r}; site is (time step, program line).
inline std::string temp(char kind, std::uint64_t t, std::uint64_t line) {
  return std::string(1, kind) + "_" + std::to_string(t) + "_" + std::to_string(line);
}
}  // namespace names

/// (2^0 = 1) and 2^b = 2^(b-1) + 2^(b-1) for b = 1..w; declares p2_0..p2_w.
inline Prop powers_of_two(Formula& f, unsigned w) {
  std::vector<Prop> cs;
  cs.push_back(f.eq(f.var(names::pow2(0)), f.one()));
  for (unsigned b = 1; b <= w; ++b)
    cs.push_back(f.eq(f.var(names::pow2(b)), f.add(f.var(names::pow2(b - 1)), f.var(names::pow2(b - 1)))));
  return f.and_(cs);
}

struct IsWordGadget {
  Prop prop;
  std::vector<std::string> bits;  // bits[b] is the name of the b-th binary digit
};

/// X = sum_b x_b 2^b with every x_b in {0,1}; the bit constraint is written x_b * x_b = x_b.
inline IsWordGadget is_word(Formula& f, Term x, const std::string& owner, unsigned w) {
  IsWordGadget g;
  std::vector<Term> parts;
  std::vector<Prop> cs;
  for (unsigned b = 0; b < w; ++b) {
    g.bits.push_back(names::bit(owner, b));
    parts.push_back(f.mul(f.var(g.bits.back()), f.var(names::pow2(b))));
  }
  cs.push_back(f.eq(x, f.sum(parts)));
  for (unsigned b = 0; b < w; ++b) {
    Term xb = f.var(g.bits[b]);
    cs.push_back(f.eq(f.mul(xb, f.var(g.bits[b])), f.var(g.bits[b])));
  }
  g.prop = f.and_(cs);
  return g;
}

/// Sum of the powers of two named by the set bits of j (the literal 0 when j = 0).
inline Term constant(Formula& f, std::uint64_t j, unsigned width) {
  if (width < 64 && j >> width) throw Error(ErrorKind::OutOfRange, std::to_string(j) + " needs more than " +
                                                                       std::to_string(width) + " bits");
  std::vector<Term> parts;
  for (unsigned b = 0; b < 64; ++b)
    if ((j >> b) & 1) parts.push_back(f.var(names::pow2(b)));
  return f.sum(parts);
}

/// X equals the word constant j, spelled through the power-of-two variables.
inline Prop equals(Formula& f, Term x, std::uint64_t j, unsigned width) { return f.eq(x, constant(f, j, width)); }

}  // namespace rram::etr
