#pragma once

#include <optional>

#include "rram/etr/compiler.hpp"
#include "rram/ram/generate.hpp"

namespace rram::etr {

/// One verifier run: program, fixed instance, certificate and the budget it is compiled under.
struct RoundtripCase {
  Program program;
  std::vector<std::uint64_t> instance;
  Input certificate;
  CompileBudget budget;
  RunResult run;
  bool accepted() const { return run.outcome == Outcome::Accept; }
};

struct RoundtripLimits {
  std::size_t max_lines = 20;
  unsigned max_w = 4;
  std::uint64_t max_T = 32;
  std::uint64_t max_real_bits = 4096;  // runs whose reals grow past this are redrawn
};

/// Draws a random case whose run finishes without a runtime fault. When want_accept is
/// set, draws until the outcome class (accept vs. everything else) matches.
inline RoundtripCase random_roundtrip_case(Rng& rng, const RoundtripLimits& lim,
                                           std::optional<bool> want_accept = std::nullopt) {
  for (;;) {
    RoundtripCase c;
    unsigned w = static_cast<unsigned>(rng.range(1, lim.max_w));
    GeneratorConfig g;
    g.w = w;
    g.lines = static_cast<std::size_t>(rng.range(2, static_cast<std::int64_t>(lim.max_lines)));
    g.reg_span = 6;
    g.allow_sqrt = true;
    c.program = random_program(rng, g);

    MachineConfig mc;
    mc.w = w;
    const std::uint64_t M = mc.registers();
    c.budget.w = w;
    c.budget.T = static_cast<std::uint64_t>(rng.range(1, static_cast<std::int64_t>(lim.max_T)));

    for (int attempt = 0; attempt < 4; ++attempt) {
      std::size_t n_inst = rng.below(std::min<std::uint64_t>(M, 3) + 1);
      std::size_t n_word = rng.below(std::min<std::uint64_t>(M - n_inst, 2) + 1);
      std::size_t n_real = rng.below(std::min<std::uint64_t>(M - n_inst - n_word, 3) + 1);
      c.instance.clear();
      c.certificate = Input{};
      for (std::size_t i = 0; i < n_inst; ++i) c.instance.push_back(rng.below(mc.word_mask() + 1));
      for (std::size_t i = 0; i < n_word; ++i) c.certificate.words.push_back(rng.below(mc.word_mask() + 1));
      for (std::size_t i = 0; i < n_real; ++i) {
        // perfect squares now and then so RSQRT has something to succeed on
        Rational r = random_rational(rng, 9, 4);
        c.certificate.reals.push_back(rng.below(3) == 0 ? r * r : r);
      }
      c.budget.n_real = n_real;
      c.budget.n_word = n_word;

      MachineConfig run_cfg = c.budget.machine();
      ExecOptions opts;
      opts.observer = [&](const MachineState&, const StepRecord& rec) {
        if (rec.write && rec.write->real &&
            bit_length(std::get<Rational>(rec.write->value)) > lim.max_real_bits)
          throw Error(ErrorKind::BudgetExceeded, "real register grew too large");
      };
      try {
        c.run = execute(c.program, detail::certificate_input(c.instance, c.certificate), run_cfg, opts);
      } catch (const Error&) {
        continue;
      }
      if (want_accept && c.accepted() != *want_accept) continue;
      return c;
    }
  }
}

struct RoundtripResult {
  bool accepted = false;
  bool value = false;
  FormulaStats stats;
  bool ok() const { return accepted == value; }
};

/// compile + witness_from_trace + evaluate on one case.
inline RoundtripResult roundtrip(const RoundtripCase& c) {
  CompiledFormula cf = compile(c.program, c.instance, c.budget);
  Assignment a = witness_from_trace(c.program, c.instance, c.certificate, c.run.trace, c.budget);
  RoundtripResult r;
  r.accepted = c.accepted();
  r.value = evaluate(cf.formula, a);
  r.stats = cf.formula.stats();
  return r;
}

}  // namespace rram::etr
