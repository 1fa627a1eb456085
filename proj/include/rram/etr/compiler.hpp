#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "rram/etr/formula.hpp"
#include "rram/etr/gadgets.hpp"
#include "rram/ram/machine.hpp"
#include "rram/ram/program.hpp"

namespace rram::etr {

struct CompileBudget {
  unsigned w = 3;
  std::uint64_t T = 1;         // time steps encoded
  std::size_t n_real = 0;      // real certificate length
  std::size_t n_word = 0;      // word certificate length
  std::uint64_t memory = 0;    // registers per array, as in MachineConfig
  std::uint64_t node_cap = 10'000'000;
  bool collapse_unwritten = false;  // drop frame constraints of registers no instruction writes

  MachineConfig machine() const {
    MachineConfig c;
    c.w = w;
    c.fuel = T;
    c.memory = memory;
    return c;
  }
};

struct CompiledFormula {
  Formula formula;
  std::uint64_t registers = 0;  // M
  unsigned pow2_width = 0;      // powers of two 2^0..2^B are declared
  std::size_t lines = 0;        // L
  std::uint64_t steps = 0;      // T
  unsigned w = 0;
};

/// Registers that some instruction may write; an indirect store makes the whole array writable.
struct WriteSets {
  std::vector<bool> W, R;
};

inline WriteSets written_registers(const Program& program, std::uint64_t M) {
  WriteSets ws{std::vector<bool>(M, false), std::vector<bool>(M, false)};
  for (const auto& ins : program.code) {
    switch (ins.op) {
      case Opcode::WSTORE: std::fill(ws.W.begin(), ws.W.end(), true); break;
      case Opcode::RSTORE: std::fill(ws.R.begin(), ws.R.end(), true); break;
      case Opcode::WCONST: case Opcode::WMOV: case Opcode::WLOAD: case Opcode::WADD: case Opcode::WSUB:
      case Opcode::WMULLO: case Opcode::WMULHI: case Opcode::WDIV: case Opcode::WMOD: case Opcode::WNAND:
        if (ins.a[0] < M) ws.W[ins.a[0]] = true;
        break;
      case Opcode::RZERO: case Opcode::RONE: case Opcode::RCONSTW: case Opcode::RCASTW: case Opcode::RMOV:
      case Opcode::RLOAD: case Opcode::RADD: case Opcode::RSUB: case Opcode::RMUL: case Opcode::RDIV:
      case Opcode::RSQRT:
        if (ins.a[0] < M) ws.R[ins.a[0]] = true;
        break;
      default: break;
    }
  }
  return ws;
}

namespace detail {

class Encoder {
 public:
  Encoder(const Program& p, const CompileBudget& b, std::uint64_t M, unsigned B)
      : p_(p), b_(b), M_(M), B_(B), f_(b.node_cap) {
    if (b.collapse_unwritten) {
      writes_ = written_registers(p, M);
    } else {
      writes_ = WriteSets{std::vector<bool>(M, true), std::vector<bool>(M, true)};
    }
  }

  Formula& formula() { return f_; }

  Term W(std::uint64_t i, std::uint64_t t) { return f_.var(names::W(i, writes_.W[i] ? t : 0)); }
  Term R(std::uint64_t i, std::uint64_t t) { return f_.var(names::R(i, writes_.R[i] ? t : 0)); }
  Term pc(std::uint64_t t) { return f_.var(names::pc(t)); }
  Term p2w() { return f_.var(names::pow2(b_.w)); }
  Prop is_const(Term x, std::uint64_t j) { return equals(f_, x, j, B_); }

  Prop build(const std::vector<std::uint64_t>& instance) {
    std::vector<Prop> top;
    // declare the register variables in a fixed order
    for (std::uint64_t t = 0; t <= b_.T; ++t) {
      pc(t);
      for (std::uint64_t i = 0; i < M_; ++i) {
        if (t == 0 || writes_.W[i]) W(i, t);
        if (t == 0 || writes_.R[i]) R(i, t);
      }
    }
    top.push_back(powers_of_two(f_, B_));

    std::vector<Prop> fix;
    for (std::size_t i = 0; i < instance.size(); ++i) fix.push_back(is_const(W(i, 0), instance[i]));
    top.push_back(f_.and_(fix));

    std::vector<Prop> words;
    for (std::uint64_t i = 0; i < M_; ++i) words.push_back(is_word(f_, W(i, 0), names::W(i, 0), b_.w).prop);
    top.push_back(f_.and_(words));

    top.push_back(is_const(pc(0), 1));

    std::vector<Prop> exec;
    exec.reserve(b_.T * p_.size());
    for (std::uint64_t t = 1; t <= b_.T; ++t)
      for (std::uint64_t l = 1; l <= p_.size(); ++l)
        exec.push_back(f_.implies(is_const(pc(t - 1), l), update(t, l)));
    top.push_back(f_.and_(exec));

    top.push_back(f_.eq(pc(b_.T), f_.zero()));
    return f_.and_(top);
  }

 private:
  // W(i,t) = W(i,t-1) for every register outside the given exceptions.
  void frame_W(std::vector<Prop>& cs, std::uint64_t t, std::optional<std::uint64_t> except = std::nullopt) {
    for (std::uint64_t i = 0; i < M_; ++i)
      if (writes_.W[i] && (!except || *except != i)) cs.push_back(f_.eq(W(i, t), W(i, t - 1)));
  }
  void frame_R(std::vector<Prop>& cs, std::uint64_t t, std::optional<std::uint64_t> except = std::nullopt) {
    for (std::uint64_t i = 0; i < M_; ++i)
      if (writes_.R[i] && (!except || *except != i)) cs.push_back(f_.eq(R(i, t), R(i, t - 1)));
  }
  Prop step(std::uint64_t t) { return f_.eq(pc(t), f_.add(pc(t - 1), f_.one())); }

  Prop update(std::uint64_t t, std::uint64_t l) {
    const Instruction& ins = p_.line(l);
    const auto i = ins.a[0], j = ins.a[1], k = ins.a[2];
    std::vector<Prop> cs;
    auto word_result = [&](Prop body) {
      cs.push_back(body);
      frame_W(cs, t, i);
      frame_R(cs, t);
      cs.push_back(step(t));
    };
    auto real_result = [&](Prop body) {
      cs.push_back(body);
      frame_W(cs, t);
      frame_R(cs, t, i);
      cs.push_back(step(t));
    };
    auto branch = [&](Prop cond) {
      cs.push_back(f_.ite(cond, is_const(pc(t), ins.target()), step(t)));
      frame_W(cs, t);
      frame_R(cs, t);
    };
    auto word_pair = [&](char hi_name, char lo_name) {
      // IsWord(hi), IsWord(lo) for two fresh per-site temporaries
      std::string hn = names::temp(hi_name, t, l), ln = names::temp(lo_name, t, l);
      cs.push_back(is_word(f_, f_.var(hn), hn, b_.w).prop);
      cs.push_back(is_word(f_, f_.var(ln), ln, b_.w).prop);
      return std::pair<std::string, std::string>{hn, ln};
    };

    switch (ins.op) {
      case Opcode::WCONST: word_result(is_const(W(i, t), j)); break;
      case Opcode::WMOV: word_result(f_.eq(W(i, t), W(j, t - 1))); break;
      case Opcode::WLOAD: {
        std::vector<Prop> alts;
        for (std::uint64_t a = 0; a < M_; ++a)
          alts.push_back(f_.and_({is_const(W(j, t - 1), a), f_.eq(W(i, t), W(a, t - 1))}));
        word_result(f_.or_(alts));
        break;
      }
      case Opcode::WSTORE: {
        std::vector<Prop> alts;
        for (std::uint64_t a = 0; a < M_; ++a)
          alts.push_back(f_.and_({is_const(W(i, t - 1), a), f_.eq(W(a, t), W(j, t - 1))}));
        cs.push_back(f_.or_(alts));
        // untouched addresses keep their value
        for (std::uint64_t a = 0; a < M_; ++a)
          cs.push_back(f_.ite(is_const(W(i, t - 1), a), f_.eq(W(a, t), W(j, t - 1)), f_.eq(W(a, t), W(a, t - 1))));
        frame_R(cs, t);
        cs.push_back(step(t));
        break;
      }
      case Opcode::WADD: {
        Term z = f_.var(names::temp('z', t, l));
        cs.push_back(f_.eq(z, f_.add(W(j, t - 1), W(k, t - 1))));
        word_result(f_.ite(f_.lt(f_.var(names::temp('z', t, l)), p2w()), f_.eq(W(i, t), f_.var(names::temp('z', t, l))),
                           f_.eq(f_.add(W(i, t), p2w()), f_.var(names::temp('z', t, l)))));
        break;
      }
      case Opcode::WSUB: {
        // z = y - z' is written z + z' = y
        Term z = f_.var(names::temp('z', t, l));
        cs.push_back(f_.eq(f_.add(z, W(k, t - 1)), W(j, t - 1)));
        word_result(f_.ite(f_.le(f_.zero(), f_.var(names::temp('z', t, l))),
                           f_.eq(W(i, t), f_.var(names::temp('z', t, l))),
                           f_.eq(W(i, t), f_.add(f_.var(names::temp('z', t, l)), p2w()))));
        break;
      }
      case Opcode::WMULLO:
      case Opcode::WMULHI: {
        auto [un, ln] = word_pair('u', 'l');
        cs.push_back(f_.eq(f_.add(f_.mul(f_.var(un), p2w()), f_.var(ln)), f_.mul(W(j, t - 1), W(k, t - 1))));
        word_result(f_.eq(W(i, t), f_.var(ins.op == Opcode::WMULLO ? ln : un)));
        break;
      }
      case Opcode::WDIV:
      case Opcode::WMOD: {
        auto [qn, rn] = word_pair('q', 'r');
        cs.push_back(f_.eq(f_.add(f_.var(rn), f_.mul(W(k, t - 1), f_.var(qn))), W(j, t - 1)));
        cs.push_back(f_.lt(f_.var(rn), W(k, t - 1)));
        word_result(f_.eq(W(i, t), f_.var(ins.op == Opcode::WDIV ? qn : rn)));
        break;
      }
      case Opcode::WNAND: {
        auto out = is_word(f_, W(i, t), names::temp('o', t, l), b_.w);
        auto a = is_word(f_, W(j, t - 1), names::temp('a', t, l), b_.w);
        auto b = is_word(f_, W(k, t - 1), names::temp('b', t, l), b_.w);
        cs.push_back(out.prop);
        cs.push_back(a.prop);
        cs.push_back(b.prop);
        std::vector<Prop> bits;
        // out_b = 1 - a_b b_b, written out_b + a_b b_b = 1
        for (unsigned bb = 0; bb < b_.w; ++bb)
          bits.push_back(f_.eq(f_.add(f_.var(out.bits[bb]), f_.mul(f_.var(a.bits[bb]), f_.var(b.bits[bb]))), f_.one()));
        word_result(f_.and_(bits));
        break;
      }
      case Opcode::RZERO: real_result(f_.eq(R(i, t), f_.zero())); break;
      case Opcode::RONE: real_result(f_.eq(R(i, t), f_.one())); break;
      case Opcode::RCONSTW: real_result(is_const(R(i, t), j)); break;
      case Opcode::RCASTW: real_result(f_.eq(R(i, t), W(j, t - 1))); break;
      case Opcode::RMOV: real_result(f_.eq(R(i, t), R(j, t - 1))); break;
      case Opcode::RLOAD: {
        std::vector<Prop> alts;
        for (std::uint64_t a = 0; a < M_; ++a)
          alts.push_back(f_.and_({is_const(W(j, t - 1), a), f_.eq(R(i, t), R(a, t - 1))}));
        real_result(f_.or_(alts));
        break;
      }
      case Opcode::RSTORE: {
        std::vector<Prop> alts;
        for (std::uint64_t a = 0; a < M_; ++a)
          alts.push_back(f_.and_({is_const(W(i, t - 1), a), f_.eq(R(a, t), R(j, t - 1))}));
        cs.push_back(f_.or_(alts));
        for (std::uint64_t a = 0; a < M_; ++a)
          cs.push_back(f_.ite(is_const(W(i, t - 1), a), f_.eq(R(a, t), R(j, t - 1)), f_.eq(R(a, t), R(a, t - 1))));
        frame_W(cs, t);
        cs.push_back(step(t));
        break;
      }
      case Opcode::RADD: real_result(f_.eq(R(i, t), f_.add(R(j, t - 1), R(k, t - 1)))); break;
      case Opcode::RSUB: real_result(f_.eq(f_.add(R(i, t), R(k, t - 1)), R(j, t - 1))); break;
      case Opcode::RMUL: real_result(f_.eq(R(i, t), f_.mul(R(j, t - 1), R(k, t - 1)))); break;
      case Opcode::RDIV:
        real_result(f_.and_({f_.eq(f_.mul(R(i, t), R(k, t - 1)), R(j, t - 1)), f_.not_(f_.eq(R(k, t - 1), f_.zero()))}));
        break;
      case Opcode::RSQRT:
        real_result(f_.and_({f_.eq(f_.mul(R(i, t), R(i, t)), R(j, t - 1)), f_.le(f_.zero(), R(i, t))}));
        break;
      case Opcode::WJEQ: branch(f_.eq(W(i, t - 1), W(j, t - 1))); break;
      case Opcode::WJLT: branch(f_.lt(W(i, t - 1), W(j, t - 1))); break;
      case Opcode::RJZ: branch(f_.eq(R(i, t - 1), f_.zero())); break;
      case Opcode::RJPOS: branch(f_.lt(f_.zero(), R(i, t - 1))); break;
      case Opcode::GOTO:
        cs.push_back(is_const(pc(t), ins.target()));
        frame_W(cs, t);
        frame_R(cs, t);
        break;
      case Opcode::ACCEPT:
        for (std::uint64_t s = t; s <= b_.T; ++s) cs.push_back(f_.eq(pc(s), f_.zero()));
        frame_W(cs, t);
        frame_R(cs, t);
        break;
      case Opcode::HALT:
      case Opcode::REJECT: return f_.falsum();
    }
    return f_.and_(cs);
  }

  const Program& p_;
  const CompileBudget& b_;
  std::uint64_t M_;
  unsigned B_;
  Formula f_;
  WriteSets writes_;
};

inline Input certificate_input(const std::vector<std::uint64_t>& instance, const Input& certificate) {
  Input in;
  in.reals = certificate.reals;
  in.words = instance;
  in.words.insert(in.words.end(), certificate.words.begin(), certificate.words.end());
  return in;
}

}  // namespace detail

/// Width B of the power-of-two table: enough for word constants (w) and line numbers (BIT(L)).
inline unsigned pow2_width(const Program& program, unsigned w) {
  return std::max<unsigned>(w, static_cast<unsigned>(bit_length(Integer(static_cast<unsigned long>(program.size())))));
}

/// Encodes T steps of the program on instance I as an existential sentence:
/// PowersOf2, FixInput, WordsAreWords, pc(0) = 1, Execute and pc(T) = 0.
/// The update of step t is guarded by the line executed at that step, pc(t-1).
inline CompiledFormula compile(const Program& program, const std::vector<std::uint64_t>& instance,
                               const CompileBudget& budget) {
  if (budget.T < 1) throw Error(ErrorKind::InvalidConfig, "T must be >= 1");
  MachineConfig cfg = budget.machine();
  Input shape;
  shape.reals.assign(budget.n_real, Rational(0));
  shape.words = instance;
  shape.words.resize(instance.size() + budget.n_word, 0);
  validate(program, shape, cfg);

  CompiledFormula out;
  out.registers = cfg.registers();
  out.pow2_width = pow2_width(program, budget.w);
  out.lines = program.size();
  out.steps = budget.T;
  out.w = budget.w;
  detail::Encoder enc(program, budget, out.registers, out.pow2_width);
  Prop root = enc.build(instance);
  enc.formula().set_root(root);
  out.formula = std::move(enc.formula());
  return out;
}

/// Satisfying-assignment candidate read off an execution: register variables
/// from the step-by-step states, bits from binary expansions, temporaries from
/// the operation semantics (zero at inactive sites), and pc = 0 once the run stops.
inline Assignment witness_from_trace(const Program& program, const std::vector<std::uint64_t>& instance,
                                     const Input& certificate, const ExecutionTrace& trace,
                                     const CompileBudget& budget) {
  MachineConfig cfg = budget.machine();
  const std::uint64_t M = cfg.registers();
  const unsigned B = pow2_width(program, budget.w);
  const unsigned w = budget.w;
  const std::uint64_t T = budget.T;
  Input input = detail::certificate_input(instance, certificate);

  std::vector<MachineState> states;
  states.push_back(initial_state(input, cfg));
  ExecOptions opts;
  opts.observer = [&](const MachineState& s, const StepRecord&) { states.push_back(s); };
  RunResult run = execute(program, input, cfg, opts);

  // the supplied trace must agree with this program on this input
  if (trace.steps.size() < run.trace.steps.size())
    throw Error(ErrorKind::TraceMismatch, "trace is shorter than the replayed run");
  for (std::size_t s = 0; s < run.trace.steps.size(); ++s) {
    const auto& a = run.trace.steps[s];
    const auto& b = trace.steps[s];
    if (a.t != b.t || a.pc != b.pc || !(a.ins == b.ins) || a.branch != b.branch)
      throw Error(ErrorKind::TraceMismatch, "step " + std::to_string(s + 1) + " differs from the replayed run");
  }
  if (run.outcome != Outcome::FuelExhausted && trace.steps.size() != run.trace.steps.size())
    throw Error(ErrorKind::TraceMismatch, "trace continues after the run stopped");

  Assignment a;
  auto word_bits = [&](const std::string& owner, std::uint64_t v) {
    for (unsigned b = 0; b < w; ++b) a[names::bit(owner, b)] = Rational((v >> b) & 1);
  };
  for (unsigned b = 0; b <= B; ++b) a[names::pow2(b)] = Rational(pow2(b));

  const std::uint64_t last = states.size() - 1;
  for (std::uint64_t t = 0; t <= T; ++t) {
    const MachineState& s = states[std::min(t, last)];
    a[names::pc(t)] = Rational(t == 0 ? 1 : s.pc);
    for (std::uint64_t i = 0; i < M; ++i) {
      a[names::W(i, t)] = Rational(s.W[i]);
      a[names::R(i, t)] = s.real(i);
    }
  }
  for (std::uint64_t i = 0; i < M; ++i) word_bits(names::W(i, 0), states[0].W[i]);

  const std::uint64_t mask = cfg.word_mask();
  for (std::uint64_t t = 1; t <= T; ++t) {
    bool active_step = t <= last;
    std::uint64_t active_line = active_step ? states[t - 1].pc : 0;
    for (std::uint64_t l = 1; l <= program.size(); ++l) {
      const Instruction& ins = program.line(l);
      bool active = active_step && l == active_line;
      const MachineState& prev = states[active ? t - 1 : 0];
      std::uint64_t y = active ? prev.W[ins.a[1]] : 0, z = active ? prev.W[ins.a[2]] : 0;
      switch (ins.op) {
        case Opcode::WADD:
          a[names::temp('z', t, l)] = active ? Rational(y) + Rational(z) : Rational(0);
          break;
        case Opcode::WSUB:
          a[names::temp('z', t, l)] = active ? Rational(y) - Rational(z) : Rational(0);
          break;
        case Opcode::WMULLO:
        case Opcode::WMULHI: {
          unsigned __int128 prod = static_cast<unsigned __int128>(y) * z;
          std::uint64_t hi = static_cast<std::uint64_t>(prod >> w), lo = static_cast<std::uint64_t>(prod) & mask;
          a[names::temp('u', t, l)] = Rational(hi);
          a[names::temp('l', t, l)] = Rational(lo);
          word_bits(names::temp('u', t, l), hi);
          word_bits(names::temp('l', t, l), lo);
          break;
        }
        case Opcode::WDIV:
        case Opcode::WMOD: {
          std::uint64_t q = z ? y / z : 0, r = z ? y % z : 0;
          a[names::temp('q', t, l)] = Rational(q);
          a[names::temp('r', t, l)] = Rational(r);
          word_bits(names::temp('q', t, l), q);
          word_bits(names::temp('r', t, l), r);
          break;
        }
        case Opcode::WNAND: {
          std::uint64_t o = active ? states[t].W[ins.a[0]] : 0;
          word_bits(names::temp('o', t, l), o);
          word_bits(names::temp('a', t, l), y);
          word_bits(names::temp('b', t, l), z);
          break;
        }
        default: break;
      }
    }
  }
  return a;
}

}  // namespace rram::etr
