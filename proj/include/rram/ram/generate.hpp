#pragma once

#include <string>
#include <vector>

#include "rram/exact/random.hpp"
#include "rram/ram/machine.hpp"
#include "rram/ram/program.hpp"

namespace rram {

struct GeneratorConfig {
  std::size_t lines = 12;       // L, including the terminal last line
  unsigned w = 4;
  std::uint64_t reg_span = 8;   // direct operands are drawn from [0, reg_span)
  bool forward_jumps_only = false;
  bool allow_sqrt = false;
  bool allow_real_div = true;
  bool allow_indirect = true;
  bool allow_word_div = true;
  unsigned branch_weight = 3;   // relative weight of conditional jumps
};

/// Random syntactically valid program; every operand is within the machine for w.
inline Program random_program(Rng& rng, const GeneratorConfig& g) {
  if (g.lines < 2) throw Error(ErrorKind::InvalidConfig, "random programs need at least 2 lines");
  MachineConfig mc;
  mc.w = g.w;
  const std::uint64_t span = std::min<std::uint64_t>(g.reg_span, mc.registers());
  const std::uint64_t word_max = mc.word_mask();

  std::vector<std::pair<Opcode, unsigned>> menu = {
      {Opcode::WCONST, 2}, {Opcode::WMOV, 1}, {Opcode::WADD, 3}, {Opcode::WSUB, 2}, {Opcode::WMULLO, 1},
      {Opcode::WMULHI, 1}, {Opcode::WNAND, 1}, {Opcode::RZERO, 1}, {Opcode::RONE, 1}, {Opcode::RCONSTW, 1},
      {Opcode::RCASTW, 1}, {Opcode::RMOV, 1}, {Opcode::RADD, 3}, {Opcode::RSUB, 3}, {Opcode::RMUL, 2},
      {Opcode::WJEQ, g.branch_weight}, {Opcode::WJLT, g.branch_weight}, {Opcode::RJZ, g.branch_weight},
      {Opcode::RJPOS, g.branch_weight}, {Opcode::GOTO, 1}, {Opcode::ACCEPT, 1}, {Opcode::REJECT, 1}};
  if (g.allow_word_div) menu.insert(menu.end(), {{Opcode::WDIV, 1}, {Opcode::WMOD, 1}});
  if (g.allow_real_div) menu.push_back({Opcode::RDIV, 1});
  if (g.allow_sqrt) menu.push_back({Opcode::RSQRT, 1});
  if (g.allow_indirect)
    menu.insert(menu.end(), {{Opcode::WLOAD, 1}, {Opcode::WSTORE, 1}, {Opcode::RLOAD, 1}, {Opcode::RSTORE, 1}});
  unsigned total = 0;
  for (auto& [op, wt] : menu) total += wt;

  Program p;
  p.name = "random";
  const std::uint64_t L = g.lines;
  for (std::uint64_t l = 1; l <= L; ++l) {
    Instruction ins{};
    if (l == L) {
      ins.op = rng.coin() ? Opcode::ACCEPT : Opcode::REJECT;
      p.code.push_back(ins);
      break;
    }
    std::uint64_t pick = rng.below(total);
    for (auto& [op, wt] : menu) {
      if (pick < wt) {
        ins.op = op;
        break;
      }
      pick -= wt;
    }
    auto target = [&] {
      return static_cast<std::uint64_t>(g.forward_jumps_only ? rng.range(l + 1, L) : rng.range(1, L));
    };
    auto reg = [&] { return rng.below(span); };
    switch (ins.op) {
      case Opcode::WCONST: case Opcode::RCONSTW: ins.a = {reg(), rng.below(word_max + 1), 0}; break;
      case Opcode::RZERO: case Opcode::RONE: ins.a = {reg(), 0, 0}; break;
      case Opcode::WMOV: case Opcode::RCASTW: case Opcode::RMOV: case Opcode::RSQRT:
      case Opcode::WLOAD: case Opcode::WSTORE: case Opcode::RLOAD: case Opcode::RSTORE:
        ins.a = {reg(), reg(), 0};
        break;
      case Opcode::WJEQ: case Opcode::WJLT: ins.a = {reg(), reg(), target()}; break;
      case Opcode::RJZ: case Opcode::RJPOS: ins.a = {reg(), target(), 0}; break;
      case Opcode::GOTO: ins.a = {target(), 0, 0}; break;
      case Opcode::ACCEPT: case Opcode::REJECT: case Opcode::HALT: break;
      default: ins.a = {reg(), reg(), reg()}; break;
    }
    p.code.push_back(ins);
  }
  return p;
}

/// Small random rational num/den with |num| <= max_num and den in [1, max_den].
inline Rational random_rational(Rng& rng, std::int64_t max_num, std::int64_t max_den) {
  auto num = static_cast<long>(rng.range(-max_num, max_num));
  auto den = static_cast<long>(rng.range(1, max_den));
  return Rational(Integer(num), Integer(den));
}

}  // namespace rram
