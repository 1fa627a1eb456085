#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "rram/ram/machine.hpp"

namespace rram {

/// Upper bounds for one polynomial in the real inputs: total degree, largest
/// |coefficient|, and number of monomials.
struct PolyBound {
  std::uint64_t deg = 0;
  Integer coef = 0;
  Integer monos = 0;

  static PolyBound constant(const Integer& c) {
    PolyBound p;
    p.coef = abs(c);
    p.monos = c == 0 ? 0 : 1;
    return p;
  }
};

/// Rational-function shadow p/q of one real register.
struct RegisterShadow {
  PolyBound num = PolyBound::constant(0);
  PolyBound den = PolyBound::constant(1);
  std::vector<std::uint32_t> vars;  // sorted input indices

  std::uint64_t degree() const { return std::max(num.deg, den.deg); }
  std::uint64_t dimension() const { return vars.size(); }
  Integer max_coef() const { return std::max(num.coef, den.coef); }
};

namespace detail {

inline Integer binomial(std::uint64_t n, std::uint64_t k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

inline Integer monomial_cap(std::size_t dim, std::uint64_t deg) { return binomial(dim + deg, deg); }

inline PolyBound poly_mul(const PolyBound& a, const PolyBound& b, std::size_t dim) {
  PolyBound r;
  if (a.monos == 0 || b.monos == 0) return PolyBound::constant(0);
  r.deg = a.deg + b.deg;
  if (r.deg > 1'000'000) throw Error(ErrorKind::BudgetExceeded, "shadow degree exceeds 10^6");
  r.coef = a.coef * b.coef * std::min(a.monos, b.monos);
  r.monos = std::min(Integer(a.monos * b.monos), monomial_cap(dim, r.deg));
  return r;
}

inline PolyBound poly_add(const PolyBound& a, const PolyBound& b, std::size_t dim) {
  if (a.monos == 0) return b;
  if (b.monos == 0) return a;
  PolyBound r;
  r.deg = std::max(a.deg, b.deg);
  r.coef = a.coef + b.coef;
  r.monos = std::min(Integer(a.monos + b.monos), monomial_cap(dim, r.deg));
  return r;
}

inline std::vector<std::uint32_t> var_union(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// max(1, ceil(log2 x)) for x >= 0.
inline std::uint64_t lg_floor1(const Integer& x) {
  if (x <= 2) return 1;
  return static_cast<std::uint64_t>(ceil_log2(Rational(x)));
}

}  // namespace detail

// p1/q1 + p2/q2 = (p1 q2 + p2 q1) / (q1 q2); subtraction has the same bounds.
inline RegisterShadow shadow_add(const RegisterShadow& a, const RegisterShadow& b) {
  RegisterShadow r;
  r.vars = detail::var_union(a.vars, b.vars);
  auto d = r.vars.size();
  r.num = detail::poly_add(detail::poly_mul(a.num, b.den, d), detail::poly_mul(b.num, a.den, d), d);
  r.den = detail::poly_mul(a.den, b.den, d);
  return r;
}

inline RegisterShadow shadow_mul(const RegisterShadow& a, const RegisterShadow& b) {
  RegisterShadow r;
  r.vars = detail::var_union(a.vars, b.vars);
  auto d = r.vars.size();
  r.num = detail::poly_mul(a.num, b.num, d);
  r.den = detail::poly_mul(a.den, b.den, d);
  return r;
}

inline RegisterShadow shadow_div(const RegisterShadow& a, const RegisterShadow& b) {
  RegisterShadow r;
  r.vars = detail::var_union(a.vars, b.vars);
  auto d = r.vars.size();
  r.num = detail::poly_mul(a.num, b.den, d);
  r.den = detail::poly_mul(a.den, b.num, d);
  return r;
}

inline RegisterShadow shadow_input(std::uint32_t index) {
  RegisterShadow r;
  r.num.deg = 1;
  r.num.coef = 1;
  r.num.monos = 1;
  r.vars = {index};
  return r;
}

inline RegisterShadow shadow_constant(const Integer& c) {
  RegisterShadow r;
  r.num = PolyBound::constant(c);
  return r;
}

/// One observed real-register write together with the bound terms of its shadow.
struct ShadowObservation {
  std::uint64_t t = 0;
  std::uint64_t addr = 0;
  std::uint64_t bits = 0;       // BIT of the written value
  std::uint64_t growth_term = 0;  // p * Δ^2 * lg d * lg c for this register
};

struct ShadowReport {
  std::map<std::uint64_t, RegisterShadow> registers;  // every real register touched
  std::uint64_t degree = 0;                            // Δ
  std::uint64_t dimension = 0;                         // d
  Integer max_coef = 1;                                // c
  std::uint64_t input_bits = 0;                        // p
  std::uint64_t growth_bound = 0;                       // p * Δ^2 * lg d * lg c
  std::vector<ShadowObservation> observations;
  Outcome outcome = Outcome::Halt;
};

/// p * Δ^2 * lg d * lg c with lg(x) = max(1, ceil(log2 x)).
inline std::uint64_t growth_term(std::uint64_t p, std::uint64_t degree, std::uint64_t dim, const Integer& c) {
  std::uint64_t D = std::max<std::uint64_t>(degree, 1);
  return p * D * D * detail::lg_floor1(Integer(static_cast<unsigned long>(dim))) * detail::lg_floor1(c);
}

/// Largest input bit length: max over BIT(a_i) and BIT(b_j).
inline std::uint64_t input_bit_length(const Input& input) {
  std::uint64_t p = 1;
  for (const auto& r : input.reals) p = std::max(p, bit_length(r));
  for (auto v : input.words) p = std::max(p, bit_length(Integer(static_cast<unsigned long>(v))));
  return p;
}

/// Runs the program on a concrete input and carries rational-function degree,
/// dimension and coefficient bounds for every real register along the taken path.
inline ShadowReport shadow_execute(const Program& program, const Input& input, const MachineConfig& cfg) {
  for (std::size_t idx = 0; idx < program.code.size(); ++idx)
    if (program.code[idx].op == Opcode::RSQRT)
      throw Error(ErrorKind::SqrtNotSupportedInShadow, "line " + std::to_string(idx + 1) + " uses RSQRT");

  ShadowReport rep;
  rep.input_bits = input_bit_length(input);
  for (std::uint32_t i = 0; i < input.reals.size(); ++i) rep.registers[i] = shadow_input(i);

  auto get = [&](std::uint64_t a) -> RegisterShadow {
    auto it = rep.registers.find(a);
    return it == rep.registers.end() ? shadow_constant(0) : it->second;
  };

  ExecOptions opts;
  opts.record = false;
  opts.observer = [&](const MachineState& s, const StepRecord& rec) {
    if (!rec.write || !rec.write->real) return;
    const auto& ins = rec.ins;
    RegisterShadow sh;
    switch (ins.op) {
      case Opcode::RZERO: sh = shadow_constant(0); break;
      case Opcode::RONE: sh = shadow_constant(1); break;
      case Opcode::RCONSTW: sh = shadow_constant(Integer(static_cast<unsigned long>(ins.a[1]))); break;
      case Opcode::RCASTW: sh = shadow_constant(Integer(static_cast<unsigned long>(s.W[ins.a[1]]))); break;
      case Opcode::RMOV: sh = get(ins.a[1]); break;
      case Opcode::RSTORE: sh = get(ins.a[1]); break;
      case Opcode::RLOAD: sh = get(s.W[ins.a[1]]); break;
      case Opcode::RADD:
      case Opcode::RSUB: sh = shadow_add(get(ins.a[1]), get(ins.a[2])); break;
      case Opcode::RMUL: sh = shadow_mul(get(ins.a[1]), get(ins.a[2])); break;
      case Opcode::RDIV: sh = shadow_div(get(ins.a[1]), get(ins.a[2])); break;
      default: return;
    }
    const auto& value = std::get<Rational>(rec.write->value);
    ShadowObservation ob;
    ob.t = rec.t;
    ob.addr = rec.write->addr;
    ob.bits = bit_length(value);
    ob.growth_term = growth_term(rep.input_bits, sh.degree(), sh.dimension(), sh.max_coef());
    rep.observations.push_back(ob);
    rep.registers[rec.write->addr] = std::move(sh);
  };
  RunResult run = execute(program, input, cfg, opts);
  rep.outcome = run.outcome;

  for (const auto& [a, sh] : rep.registers) {
    rep.degree = std::max(rep.degree, sh.degree());
    rep.dimension = std::max(rep.dimension, sh.dimension());
    rep.max_coef = std::max(rep.max_coef, sh.max_coef());
  }
  rep.growth_bound = growth_term(rep.input_bits, rep.degree, rep.dimension, rep.max_coef);
  return rep;
}

}  // namespace rram
