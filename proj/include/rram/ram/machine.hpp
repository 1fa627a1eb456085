#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "rram/error.hpp"
#include "rram/exact/grid.hpp"
#include "rram/exact/rational.hpp"
#include "rram/ram/program.hpp"

namespace rram {

struct MachineConfig {
  unsigned w = 8;
  std::uint64_t fuel = 1'000'000;
  std::uint64_t memory = 0;  // registers per array; 0 selects min(2^w, 2^16)

  std::uint64_t registers() const {
    if (memory == 0) return std::uint64_t{1} << (w < 16 ? w : 16);
    std::uint64_t full = std::uint64_t{1} << (w < 63 ? w : 63);
    return memory < full ? memory : full;
  }
  std::uint64_t word_mask() const { return w >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1; }
};

struct Input {
  std::vector<Rational> reals;
  std::vector<std::uint64_t> words;
};

enum class Outcome { Accept, Reject, Halt, FuelExhausted, Diverged };

constexpr std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Accept: return "ACCEPT";
    case Outcome::Reject: return "REJECT";
    case Outcome::Halt: return "HALT";
    case Outcome::FuelExhausted: return "FUEL_EXHAUSTED";
    case Outcome::Diverged: return "DIVERGED";
  }
  return "?";
}

/// Every instruction writes at most one register.
struct RegisterWrite {
  bool real = false;
  std::uint64_t addr = 0;
  std::variant<std::uint64_t, Rational> value;
};

struct StepRecord {
  std::uint64_t t = 0;   // 1-based step number
  std::uint64_t pc = 0;  // line executed at this step
  Instruction ins;
  std::optional<bool> branch;
  std::optional<RegisterWrite> write;
};

struct ExecutionTrace {
  std::vector<StepRecord> steps;
  Outcome outcome = Outcome::Halt;

  std::vector<bool> signature() const {
    std::vector<bool> out;
    for (const auto& s : steps)
      if (s.branch) out.push_back(*s.branch);
    return out;
  }
};

struct MachineState {
  std::vector<std::uint64_t> W;
  std::unordered_map<std::uint64_t, Rational> R;  // absent addresses hold 0
  std::uint64_t pc = 1;

  const Rational& real(std::uint64_t addr) const {
    static const Rational zero;
    auto it = R.find(addr);
    return it == R.end() ? zero : it->second;
  }
  void set_real(std::uint64_t addr, Rational v) {
    if (v.is_zero()) R.erase(addr);
    else R[addr] = std::move(v);
  }
};

struct ExecOptions {
  bool record = true;                          // keep per-step records
  const std::vector<bool>* reference = nullptr;  // stop with Diverged on the first differing comparison
  std::function<void(const MachineState&, const StepRecord&)> observer;
};

struct RunResult {
  Outcome outcome = Outcome::Halt;
  ExecutionTrace trace;
  std::vector<bool> signature;
  MachineState state;
  std::uint64_t steps = 0;
};

/// Initial machine state: reals to R[0..n-1], words to W[0..m-1], all else 0.
inline MachineState initial_state(const Input& input, const MachineConfig& cfg) {
  MachineState s;
  s.W.assign(cfg.registers(), 0);
  for (std::size_t i = 0; i < input.words.size(); ++i) s.W[i] = input.words[i];
  for (std::size_t i = 0; i < input.reals.size(); ++i) s.set_real(i, input.reals[i]);
  s.pc = 1;
  return s;
}

/// Checks configuration, input and the program's constant operands against the word size.
inline void validate(const Program& program, const Input& input, const MachineConfig& cfg) {
  if (cfg.w < 1 || cfg.w > 63) throw Error(ErrorKind::InvalidConfig, "word size must lie in [1,63]");
  if (cfg.fuel < 1) throw Error(ErrorKind::InvalidConfig, "fuel must be >= 1");
  if (program.real_arity && *program.real_arity != input.reals.size())
    throw Error(ErrorKind::ArityMismatch, "program expects " + std::to_string(*program.real_arity) +
                                              " reals, got " + std::to_string(input.reals.size()));
  if (program.word_arity && *program.word_arity != input.words.size())
    throw Error(ErrorKind::ArityMismatch, "program expects " + std::to_string(*program.word_arity) +
                                              " words, got " + std::to_string(input.words.size()));
  std::uint64_t N = input.reals.size() + input.words.size();
  if (N > 1 && bit_length(Integer(static_cast<unsigned long>(N - 1))) > cfg.w)
    throw Error(ErrorKind::InvalidConfig, "word size " + std::to_string(cfg.w) + " below log2 of input size " +
                                              std::to_string(N));
  const std::uint64_t M = cfg.registers();
  if (input.reals.size() > M || input.words.size() > M)
    throw Error(ErrorKind::AddressOutOfRange, "input does not fit in " + std::to_string(M) + " registers");
  for (auto v : input.words)
    if (v > cfg.word_mask()) throw Error(ErrorKind::OutOfRange, "input word " + std::to_string(v) + " exceeds 2^w-1");

  for (std::size_t idx = 0; idx < program.code.size(); ++idx) {
    const auto& ins = program.code[idx];
    auto info = opcode_info(ins.op);
    int addr_params = info.has_target ? info.params - 1 : info.params;
    for (int p = 0; p < addr_params; ++p) {
      bool constant = (ins.op == Opcode::WCONST || ins.op == Opcode::RCONSTW) && p == 1;
      std::uint64_t v = ins.a[static_cast<std::size_t>(p)];
      if (constant) {
        if (v > cfg.word_mask())
          throw Error(ErrorKind::OutOfRange, "line " + std::to_string(idx + 1) + ": constant " + std::to_string(v) +
                                                 " exceeds 2^w-1");
      } else if (v >= M) {
        throw Error(ErrorKind::AddressOutOfRange,
                    "line " + std::to_string(idx + 1) + ": address " + std::to_string(v) + " outside memory");
      }
    }
  }
}

/// Runs the program exactly. Runtime faults (division by zero, bad indirect
/// address, irrational square root) throw Error; running out of fuel is an outcome.
inline RunResult execute(const Program& program, const Input& input, const MachineConfig& cfg,
                         const ExecOptions& opts = {}) {
  validate(program, input, cfg);
  RunResult res;
  MachineState& s = res.state;
  s = initial_state(input, cfg);
  const std::uint64_t M = cfg.registers();
  const std::uint64_t mask = cfg.word_mask();
  const std::uint64_t L = program.size();

  auto addr = [&](std::uint64_t a, std::uint64_t line) {
    if (a >= M)
      throw Error(ErrorKind::AddressOutOfRange,
                  "line " + std::to_string(line) + ": indirect address " + std::to_string(a) + " outside memory");
    return a;
  };

  for (std::uint64_t t = 1;; ++t) {
    if (t > cfg.fuel) {
      res.outcome = Outcome::FuelExhausted;
      break;
    }
    const std::uint64_t line = s.pc;
    const Instruction& ins = program.code[line - 1];
    const auto i = ins.a[0], j = ins.a[1], k = ins.a[2];
    StepRecord rec;
    rec.t = t;
    rec.pc = line;
    rec.ins = ins;
    std::uint64_t next = line + 1;
    bool stop = false;

    auto wset = [&](std::uint64_t a, std::uint64_t v) {
      s.W[a] = v & mask;
      rec.write = RegisterWrite{false, a, s.W[a]};
    };
    auto rset = [&](std::uint64_t a, Rational v) {
      rec.write = RegisterWrite{true, a, v};
      s.set_real(a, std::move(v));
    };
    auto branch = [&](bool taken) {
      rec.branch = taken;
      if (taken) next = ins.target();
    };

    switch (ins.op) {
      case Opcode::WCONST: wset(i, j); break;
      case Opcode::WMOV: wset(i, s.W[j]); break;
      case Opcode::WSTORE: wset(addr(s.W[i], line), s.W[j]); break;
      case Opcode::WLOAD: wset(i, s.W[addr(s.W[j], line)]); break;
      case Opcode::WADD: wset(i, s.W[j] + s.W[k]); break;
      case Opcode::WSUB: wset(i, s.W[j] - s.W[k]); break;
      case Opcode::WMULLO:
        wset(i, static_cast<std::uint64_t>(static_cast<unsigned __int128>(s.W[j]) * s.W[k]));
        break;
      case Opcode::WMULHI:
        wset(i, static_cast<std::uint64_t>((static_cast<unsigned __int128>(s.W[j]) * s.W[k]) >> cfg.w));
        break;
      case Opcode::WDIV:
        if (s.W[k] == 0) throw Error(ErrorKind::DivisionByZero, "line " + std::to_string(line) + ": word division by zero");
        wset(i, s.W[j] / s.W[k]);
        break;
      case Opcode::WMOD:
        if (s.W[k] == 0) throw Error(ErrorKind::DivisionByZero, "line " + std::to_string(line) + ": word remainder by zero");
        wset(i, s.W[j] % s.W[k]);
        break;
      case Opcode::WNAND: wset(i, ~(s.W[j] & s.W[k])); break;
      case Opcode::RZERO: rset(i, Rational(0)); break;
      case Opcode::RONE: rset(i, Rational(1)); break;
      case Opcode::RCONSTW: rset(i, Rational(j)); break;
      case Opcode::RCASTW: rset(i, Rational(s.W[j])); break;
      case Opcode::RMOV: rset(i, s.real(j)); break;
      case Opcode::RSTORE: rset(addr(s.W[i], line), s.real(j)); break;
      case Opcode::RLOAD: rset(i, s.real(addr(s.W[j], line))); break;
      case Opcode::RADD: rset(i, s.real(j) + s.real(k)); break;
      case Opcode::RSUB: rset(i, s.real(j) - s.real(k)); break;
      case Opcode::RMUL: rset(i, s.real(j) * s.real(k)); break;
      case Opcode::RDIV:
        if (s.real(k).is_zero())
          throw Error(ErrorKind::DivisionByZero, "line " + std::to_string(line) + ": real division by zero");
        rset(i, s.real(j) / s.real(k));
        break;
      case Opcode::RSQRT: {
        const Rational& y = s.real(j);
        if (y.sign() < 0)
          throw Error(ErrorKind::ExecutionError, "line " + std::to_string(line) + ": square root of negative value");
        Rational root;
        if (!exact_sqrt(y, root))
          throw Error(ErrorKind::UnsupportedExactRoot,
                      "line " + std::to_string(line) + ": " + y.str() + " is not the square of a rational");
        rset(i, root);
        break;
      }
      case Opcode::WJEQ: branch(s.W[i] == s.W[j]); break;
      case Opcode::WJLT: branch(s.W[i] < s.W[j]); break;
      case Opcode::RJZ: branch(s.real(i).is_zero()); break;
      case Opcode::RJPOS: branch(s.real(i).sign() > 0); break;
      case Opcode::GOTO: next = ins.target(); break;
      case Opcode::HALT: res.outcome = Outcome::Halt; stop = true; break;
      case Opcode::ACCEPT: res.outcome = Outcome::Accept; stop = true; break;
      case Opcode::REJECT: res.outcome = Outcome::Reject; stop = true; break;
    }

    res.steps = t;
    bool diverged = false;
    if (rec.branch) {
      std::size_t idx = res.signature.size();
      res.signature.push_back(*rec.branch);
      if (opts.reference && (idx >= opts.reference->size() || (*opts.reference)[idx] != *rec.branch))
        diverged = true;
    }
    s.pc = stop ? 0 : next;
    if (opts.observer) opts.observer(s, rec);
    if (opts.record) res.trace.steps.push_back(std::move(rec));
    if (diverged) {
      res.outcome = Outcome::Diverged;
      break;
    }
    if (stop) break;
    if (s.pc < 1 || s.pc > L)
      throw Error(ErrorKind::ExecutionError, "control left the program at line " + std::to_string(line));
  }
  res.trace.outcome = res.outcome;
  return res;
}

inline std::vector<bool> comparison_signature(const ExecutionTrace& trace) { return trace.signature(); }

/// Inputs are equivalent when every executed comparison agrees, position by position.
inline bool equivalent(const Program& program, const Input& a, const Input& b, const MachineConfig& cfg) {
  ExecOptions quiet;
  quiet.record = false;
  RunResult ra = execute(program, a, cfg, quiet);
  ExecOptions follow = quiet;
  follow.reference = &ra.signature;
  RunResult rb = execute(program, b, cfg, follow);
  return rb.outcome == ra.outcome && rb.signature == ra.signature;
}

/// Smallest w' <= wmax for which snapping the real input to the 2^-w' grid keeps
/// every comparison outcome. An upper bound on the input bit complexity.
inline std::optional<unsigned> snapped_bit_complexity(const Program& program, const Input& g, const MachineConfig& cfg,
                                                      unsigned wmax) {
  if (wmax < 1) throw Error(ErrorKind::InvalidConfig, "wmax must be >= 1");
  ExecOptions quiet;
  quiet.record = false;
  RunResult ref = execute(program, g, cfg, quiet);
  ExecOptions follow = quiet;
  follow.reference = &ref.signature;
  for (unsigned wp = 1; wp <= wmax; ++wp) {
    Input snapped{snap(g.reals, DyadicGrid(wp)), g.words};
    try {
      RunResult r = execute(program, snapped, cfg, follow);
      if (r.outcome == ref.outcome && r.signature == ref.signature) return wp;
    } catch (const Error&) {
      // a snapped input that faults cannot be equivalent to one that did not
    }
  }
  return std::nullopt;
}

}  // namespace rram
