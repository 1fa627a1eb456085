#include <gtest/gtest.h>

#include "rram/ram/io.hpp"
#include "rram/ram/machine.hpp"
#include "rram/ram/program.hpp"
#include "rram/ram/shadow.hpp"

using namespace rram;

namespace {

std::string fixture(const std::string& name) { return std::string(RRAM_SOURCE_DIR) + "/fixtures/" + name; }

Program load(const std::string& name) { return parse_program(read_text_file(fixture(name))); }

Rational q(const char* s) { return Rational::parse(s); }

Input reals(std::initializer_list<const char*> xs) {
  Input in;
  for (auto x : xs) in.reals.push_back(q(x));
  return in;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::ExecutionError;
}

}  // namespace

TEST(Parse, SingleHalt) {
  Program p = parse_program("HALT");
  EXPECT_EQ(p.size(), 1u);
  EXPECT_EQ(p.code[0].op, Opcode::HALT);
}

TEST(Parse, UnknownOpcodeNamesLine) {
  try {
    parse_program("FROB 1 2");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
}

TEST(Parse, Diagnostics) {
  EXPECT_EQ(kind_of([] { parse_program("WADD 1 2\nHALT"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_program("GOTO nowhere"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_program("GOTO 5\nHALT"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_program("RZERO 1"); }), ErrorKind::ParseError);  // falls off the end
  EXPECT_EQ(kind_of([] { parse_program("a: HALT\na: HALT"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_program("# nothing"); }), ErrorKind::ParseError);
}

TEST(Parse, SumLoopFixtureHasNineInstructions) {
  Program p = load("sum_loop.rram");
  EXPECT_EQ(p.size(), 9u);
  EXPECT_EQ(p.name, "sum_loop");
  EXPECT_EQ(p.labels.at("done"), 9u);
  // canonical text reparses to the same code
  EXPECT_EQ(parse_program(p.str()).code, p.code);
}

TEST(Execute, SumProgram) {
  Program p = load("sum_loop.rram");
  InputFile f = parse_input(read_text_file(fixture("sum2.in")));
  MachineConfig cfg;
  cfg.w = f.w;
  RunResult r = execute(p, f.input, cfg);
  EXPECT_EQ(r.outcome, Outcome::Halt);
  EXPECT_EQ(r.state.real(0), q("5/6"));
}

TEST(Execute, WordAddWraps) {
  Program p = parse_program("WADD 2 0 1\nHALT");
  MachineConfig cfg;
  cfg.w = 4;
  Input in;
  in.words = {13, 7};
  RunResult r = execute(p, in, cfg);
  EXPECT_EQ(r.state.W[2], 4u);
}

TEST(Execute, RuntimeErrors) {
  MachineConfig cfg;
  cfg.w = 8;
  EXPECT_EQ(kind_of([&] { execute(parse_program("RDIV 2 0 1\nHALT"), reals({"1", "0"}), cfg); }),
            ErrorKind::DivisionByZero);
  Input w;
  w.words = {3, 0};
  EXPECT_EQ(kind_of([&] { execute(parse_program("WDIV 2 0 1\nHALT"), w, cfg); }), ErrorKind::DivisionByZero);
  EXPECT_EQ(kind_of([&] { execute(parse_program("WMOD 2 0 1\nHALT"), w, cfg); }), ErrorKind::DivisionByZero);
  EXPECT_EQ(kind_of([&] { execute(parse_program("RSQRT 1 0\nHALT"), reals({"2"}), cfg); }),
            ErrorKind::UnsupportedExactRoot);
  MachineConfig small;
  small.w = 8;
  small.memory = 4;
  Input addr;
  addr.words = {9};
  EXPECT_EQ(kind_of([&] { execute(parse_program("WLOAD 1 0\nHALT"), addr, small); }), ErrorKind::AddressOutOfRange);
  EXPECT_EQ(kind_of([&] { execute(parse_program("WMOV 7 0\nHALT"), addr, small); }), ErrorKind::AddressOutOfRange);
  EXPECT_EQ(kind_of([&] { execute(parse_program("WCONST 1 300\nHALT"), Input{}, cfg); }), ErrorKind::OutOfRange);
}

TEST(Execute, SquareRootOfPerfectSquare) {
  MachineConfig cfg;
  RunResult r = execute(parse_program("RSQRT 1 0\nHALT"), reals({"9/4"}), cfg);
  EXPECT_EQ(r.state.real(1), q("3/2"));
}

TEST(Execute, FuelExhaustedIsAnOutcome) {
  MachineConfig cfg;
  cfg.fuel = 50;
  RunResult r = execute(parse_program("x: GOTO x"), Input{}, cfg);
  EXPECT_EQ(r.outcome, Outcome::FuelExhausted);
  EXPECT_EQ(r.trace.steps.size(), 50u);
}

TEST(Execute, TransDichotomousCheck) {
  MachineConfig cfg;
  cfg.w = 2;
  Input in = reals({"0", "0", "0", "0", "0"});
  EXPECT_EQ(kind_of([&] { execute(parse_program("HALT"), in, cfg); }), ErrorKind::InvalidConfig);
  in.reals.pop_back();
  EXPECT_NO_THROW(execute(parse_program("HALT"), in, cfg));
}

TEST(Execute, ArityDirective) {
  MachineConfig cfg;
  EXPECT_EQ(kind_of([&] { execute(load("line_test.rram"), reals({"1/2"}), cfg); }), ErrorKind::ArityMismatch);
}

TEST(Execute, IndirectStoresAndLoads) {
  Program p = parse_program(
      "WCONST 1 5\n"
      "WCONST 2 42\n"
      "WSTORE 1 2\n"   // W[5] = 42
      "WLOAD 3 1\n"    // W[3] = W[5]
      "RSTORE 1 0\n"   // R[5] = R[0]
      "RLOAD 2 1\n"    // R[2] = R[5]
      "RCASTW 3 3\n"   // R[3] = 42
      "RCONSTW 4 7\n"
      "WNAND 6 2 2\n"
      "WMULHI 7 2 2\n"
      "WMULLO 8 2 2\n"
      "HALT");
  MachineConfig cfg;
  cfg.w = 8;
  RunResult r = execute(p, reals({"-2/3"}), cfg);
  EXPECT_EQ(r.state.W[5], 42u);
  EXPECT_EQ(r.state.W[3], 42u);
  EXPECT_EQ(r.state.real(5), q("-2/3"));
  EXPECT_EQ(r.state.real(2), q("-2/3"));
  EXPECT_EQ(r.state.real(3), Rational(42));
  EXPECT_EQ(r.state.real(4), Rational(7));
  EXPECT_EQ(r.state.W[6], static_cast<std::uint64_t>(~42 & 0xff));
  EXPECT_EQ(r.state.W[7], (42u * 42u) >> 8);
  EXPECT_EQ(r.state.W[8], (42u * 42u) & 0xffu);
}

TEST(Execute, TraceRecordsBranchesOnlyAtComparisons) {
  Program p = load("sum_loop.rram");
  InputFile f = parse_input(read_text_file(fixture("sum2.in")));
  MachineConfig cfg;
  RunResult r = execute(p, f.input, cfg);
  for (const auto& s : r.trace.steps) EXPECT_EQ(s.branch.has_value(), is_comparison(s.ins.op));
  std::string text = export_trace(r.trace);
  EXPECT_NE(text.find("3 3 WJLT branch=1"), std::string::npos);
  EXPECT_EQ(r.trace.signature(), (std::vector<bool>{true, false}));
}

TEST(Execute, DeterministicTraces) {
  Program p = load("line_test.rram");
  MachineConfig cfg;
  auto a = execute(p, reals({"1/5", "4/5"}), cfg);
  auto b = execute(p, reals({"1/5", "4/5"}), cfg);
  EXPECT_EQ(export_trace(a.trace), export_trace(b.trace));
  EXPECT_EQ(a.signature, b.signature);
}

TEST(Signature, EmptyWithoutComparisons) {
  MachineConfig cfg;
  auto r = execute(parse_program("RONE 0\nHALT"), Input{}, cfg);
  EXPECT_TRUE(comparison_signature(r.trace).empty());
}

TEST(Signature, LineTestBelow) {
  MachineConfig cfg;
  auto r = execute(load("line_test.rram"), reals({"1/5", "4/5"}), cfg);
  // 4/5 - (1/10 + 1) < 0: neither zero nor positive
  EXPECT_EQ(comparison_signature(r.trace), (std::vector<bool>{false, false}));
  EXPECT_EQ(r.outcome, Outcome::Reject);
}

TEST(Equivalence, LineTestExamples) {
  Program p = load("line_test.rram");
  MachineConfig cfg;
  Input g = reals({"1/5", "4/5"});
  EXPECT_TRUE(equivalent(p, g, g, cfg));
  EXPECT_TRUE(equivalent(p, g, reals({"1/4", "3/4"}), cfg));
  EXPECT_FALSE(equivalent(p, reals({"1/2", "5/4"}), reals({"1/2", "11/8"}), cfg));
}

TEST(Equivalence, IsAnEquivalenceRelationOnSamples) {
  Program p = load("line_third.rram");
  MachineConfig cfg;
  Rng rng(77);
  std::vector<Input> pool;
  for (int i = 0; i < 30; ++i) {
    Input in;
    for (int c = 0; c < 2; ++c) in.reals.push_back(Rational(Integer(static_cast<long>(rng.range(0, 6))), Integer(6)));
    pool.push_back(in);
  }
  for (std::size_t a = 0; a < pool.size(); ++a) {
    EXPECT_TRUE(equivalent(p, pool[a], pool[a], cfg));
    for (std::size_t b = 0; b < pool.size(); ++b) {
      bool ab = equivalent(p, pool[a], pool[b], cfg);
      EXPECT_EQ(ab, equivalent(p, pool[b], pool[a], cfg));
      for (std::size_t c = 0; c < pool.size(); c += 7) {
        if (ab && equivalent(p, pool[b], pool[c], cfg)) {
          EXPECT_TRUE(equivalent(p, pool[a], pool[c], cfg));
        }
      }
    }
  }
}

TEST(SnappedBits, GridPointIsImmediate) {
  Program p = load("line_test.rram");
  MachineConfig cfg;
  auto r = snapped_bit_complexity(p, reals({"3/8", "5/8"}), cfg, 10);
  ASSERT_TRUE(r.has_value());
  EXPECT_LE(*r, 3u);
}

TEST(SnappedBits, LineTestOffGrid) {
  Program p = load("line_test.rram");
  MachineConfig cfg;
  auto r = snapped_bit_complexity(p, reals({"1/5", "4/5"}), cfg, 10);
  ASSERT_TRUE(r.has_value());
  EXPECT_LE(*r, 3u);
}

TEST(SnappedBits, PointOnTheLineNeverSnapsEquivalently) {
  // (3/5, 1/5) lies on y = x/3 and no dyadic snap of it stays on that line
  Program p = load("line_third.rram");
  MachineConfig cfg;
  auto run = execute(p, reals({"3/5", "1/5"}), cfg);
  EXPECT_EQ(run.outcome, Outcome::Halt);
  EXPECT_FALSE(snapped_bit_complexity(p, reals({"3/5", "1/5"}), cfg, 40).has_value());
}

TEST(SnappedBits, ExactGridInputsNeedAtMostW) {
  Program p = load("line_third.rram");
  MachineConfig cfg;
  Rng rng(4);
  for (unsigned w = 1; w <= 8; ++w)
    for (int it = 0; it < 20; ++it) {
      Integer den = pow2(w);
      Input in;
      for (int c = 0; c < 2; ++c) in.reals.push_back(Rational(rng.below(den + 1), den));
      auto r = snapped_bit_complexity(p, in, cfg, w);
      ASSERT_TRUE(r.has_value());
      EXPECT_LE(*r, w);
    }
}

TEST(Shadow, ProductOfInputs) {
  MachineConfig cfg;
  auto rep = shadow_execute(parse_program("RMUL 2 0 1\nHALT"), reals({"1/2", "1/3"}), cfg);
  const auto& s = rep.registers.at(2);
  EXPECT_EQ(s.degree(), 2u);
  EXPECT_EQ(s.dimension(), 2u);
  EXPECT_EQ(s.max_coef(), 1);
}

TEST(Shadow, CopyPreserves) {
  MachineConfig cfg;
  auto rep = shadow_execute(parse_program("RMOV 2 0\nHALT"), reals({"1/2"}), cfg);
  EXPECT_EQ(rep.registers.at(2).degree(), rep.registers.at(0).degree());
  EXPECT_EQ(rep.registers.at(2).vars, rep.registers.at(0).vars);
}

TEST(Shadow, QuotientRule) {
  MachineConfig cfg;
  auto rep = shadow_execute(parse_program("RADD 3 0 1\nRDIV 3 3 2\nHALT"), reals({"1", "2", "3"}), cfg);
  const auto& s = rep.registers.at(3);
  EXPECT_EQ(s.num.deg, 1u);
  EXPECT_EQ(s.den.deg, 1u);
  EXPECT_EQ(s.dimension(), 3u);
}

TEST(Shadow, RefusesSquareRoot) {
  MachineConfig cfg;
  EXPECT_EQ(kind_of([&] { shadow_execute(parse_program("RSQRT 1 0\nHALT"), reals({"4"}), cfg); }),
            ErrorKind::SqrtNotSupportedInShadow);
}

TEST(Shadow, MonotoneAlongOps) {
  MachineConfig cfg;
  auto rep = shadow_execute(parse_program("RMUL 1 0 0\nRADD 2 1 0\nRMUL 3 2 1\nHALT"), reals({"3/7"}), cfg);
  EXPECT_LE(rep.registers.at(0).degree(), rep.registers.at(1).degree());
  EXPECT_LE(rep.registers.at(1).degree(), rep.registers.at(2).degree());
  EXPECT_LE(rep.registers.at(2).degree(), rep.registers.at(3).degree());
  EXPECT_LE(rep.registers.at(1).max_coef(), rep.registers.at(3).max_coef());
  EXPECT_EQ(rep.degree, 4u);
  for (const auto& ob : rep.observations) EXPECT_LE(ob.bits, 8 * ob.growth_term + 2 * (cfg.w + 1));
}
