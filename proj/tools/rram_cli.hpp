#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rram/etr/compiler.hpp"
#include "rram/etr/textio.hpp"
#include "rram/geo/packing.hpp"
#include "rram/lab/experiments.hpp"
#include "rram/ram/io.hpp"
#include "rram/ram/shadow.hpp"

namespace rram::cli {

using namespace rram::etr;
using Json = nlohmann::ordered_json;

inline constexpr const char* kRngScheme =
    "mt19937_64 per trial, seeded splitmix64(splitmix64(seed) ^ splitmix64(trial + 1))";

/// Raised for argument combinations CLI11 cannot express; exits with status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

inline std::vector<std::string> tokens(std::string s) {
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream ss(s);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

inline std::vector<Rational> rationals(const std::string& s) {
  std::vector<Rational> out;
  for (const auto& t : tokens(s)) out.push_back(Rational::parse(t));
  return out;
}

inline std::vector<std::uint64_t> words(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& t : tokens(s)) {
    std::uint64_t v = 0;
    if (!rram::detail::parse_u64(t, v)) throw UsageError("not a word value: '" + t + "'");
    out.push_back(v);
  }
  return out;
}

inline std::string slurp(const std::string& path, Io& io) {
  if (path == "-") {
    std::ostringstream ss;
    ss << io.in.rdbuf();
    return ss.str();
  }
  return read_text_file(path);
}

/// Writes text to --out when given, else to stdout.
inline void emit(const std::string& text, const std::string& out_path, Io& io) {
  if (out_path.empty()) {
    io.out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw Error(ErrorKind::ParseError, "cannot write '" + out_path + "'");
  f << text;
}

inline void emit_json(const Json& j, const std::string& out_path, Io& io) { emit(j.dump(2) + "\n", out_path, io); }

inline std::string rat(const Rational& r) { return r.str(); }

inline std::string point_str(const geo::Point& p) { return p.x.str() + " " + p.y.str(); }

inline geo::Point point_arg(const std::string& s, const char* flag) {
  auto v = rationals(s);
  if (v.size() != 2) throw UsageError(std::string(flag) + " expects two rationals 'x y'");
  return {v[0], v[1]};
}

inline double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

// options shared by commands that run a program on an input
struct RunArgs {
  std::string program = "", input = "", reals = "", words = "";
  unsigned w = 0;
  std::uint64_t fuel = 1'000'000, memory = 0;

  void add(CLI::App* c) {
    c->add_option("--program", program, "program file, '-' for stdin")->required();
    c->add_option("--input", input, "input file: 'n m w', n reals, m words");
    c->add_option("--reals", reals, "real inputs, e.g. \"1/2 1/3\"");
    c->add_option("--words", words, "word inputs, e.g. \"2 5\"");
    c->add_option("--word-size", w, "word size w (overrides the input file)")->check(CLI::Range(1, 63));
    c->add_option("--fuel", fuel, "step budget");
    c->add_option("--memory", memory, "registers per array (0: min(2^w, 2^16))");
  }

  std::pair<Program, Input> load(MachineConfig& cfg, Io& io) const {
    Program p = parse_program(slurp(program, io));
    Input in;
    unsigned file_w = 0;
    if (!input.empty()) {
      if (!reals.empty() || !words.empty()) throw UsageError("--input excludes --reals/--words");
      InputFile f = parse_input(slurp(input, io));
      in = f.input;
      file_w = f.w;
    } else {
      in.reals = rationals(reals);
      in.words = detail::words(words);
    }
    cfg.w = w ? w : (file_w ? file_w : 8);
    cfg.fuel = fuel;
    cfg.memory = memory;
    return {p, in};
  }
};

// options shared by commands that compile a program to a formula
struct CompileArgs {
  std::string program = "", instance = "", real_cert = "", word_cert = "";
  unsigned w = 3;
  std::uint64_t steps = 1, memory = 0, node_cap = 10'000'000;
  bool collapse = false;

  void add(CLI::App* c) {
    c->add_option("--program", program, "program file, '-' for stdin")->required();
    c->add_option("--instance", instance, "instance words, e.g. \"3 3\"");
    c->add_option("--real-cert", real_cert, "real certificate values");
    c->add_option("--word-cert", word_cert, "word certificate values");
    c->add_option("--word-size", w, "word size w")->check(CLI::Range(1, 16));
    c->add_option("--steps", steps, "time steps T")->check(CLI::PositiveNumber);
    c->add_option("--memory", memory, "registers per array (0: min(2^w, 2^16))");
    c->add_option("--node-cap", node_cap, "formula node limit");
    c->add_flag("--collapse-unwritten", collapse, "omit frames of registers no instruction writes");
  }

  struct Loaded {
    Program program;
    std::vector<std::uint64_t> instance;
    Input cert;
    CompileBudget budget;
  };

  Loaded load(Io& io) const {
    Loaded l;
    l.program = parse_program(slurp(program, io));
    l.instance = words(instance);
    l.cert.reals = rationals(real_cert);
    l.cert.words = words(word_cert);
    l.budget.w = w;
    l.budget.T = steps;
    l.budget.memory = memory;
    l.budget.node_cap = node_cap;
    l.budget.n_real = l.cert.reals.size();
    l.budget.n_word = l.cert.words.size();
    l.budget.collapse_unwritten = collapse;
    return l;
  }
};

inline Json stats_json(const CompiledFormula& cf) {
  FormulaStats s = cf.formula.stats();
  // size term 2^w (T + w) + T L w of the variable-count law
  Integer term = pow2(cf.w) * Integer(static_cast<unsigned long>(cf.steps + cf.w)) +
                 Integer(static_cast<unsigned long>(cf.steps * cf.lines * cf.w));
  Json j;
  j["variables"] = s.variables;
  j["nodes"] = s.nodes;
  j["depth"] = s.depth;
  j["registers"] = cf.registers;
  j["pow2_width"] = cf.pow2_width;
  j["lines"] = cf.lines;
  j["steps"] = cf.steps;
  j["w"] = cf.w;
  j["size_term"] = term.get_str();
  j["kappa"] = rat(Rational(Integer(static_cast<unsigned long>(s.variables)), term));
  return j;
}

inline std::vector<geo::Point> points_arg(const std::string& path, Io& io) {
  auto pts = geo::parse_points(slurp(path, io));
  return pts;
}

}  // namespace detail

/// Runs one command line (without the program name). Returns the process exit status:
/// 0 success, 1 domain error or failed bound check, 2 usage error.
inline int run_command(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  using namespace detail;
  Io io{in, out, err};
  CLI::App app{"Exact real RAM toolkit: run, compile to ETR, smoothed-analysis experiments, geometry"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_path;
  bool timing = false;
  app.add_option("--out", out_path, "write the output here instead of stdout");
  app.add_flag("--timing", timing, "fill wall_ms in reports (otherwise 0, keeping reports byte-identical)");
  int status = 0;
  auto t0 = std::chrono::steady_clock::now();
  auto wall = [&] { return timing ? ms_since(t0) : 0.0; };

  // ram ---------------------------------------------------------------------------
  auto* ram = app.add_subcommand("ram", "real RAM execution")->require_subcommand(1);

  RunArgs run_args;
  auto* ram_run = ram->add_subcommand("run", "execute a program and print the outcome and R0");
  run_args.add(ram_run);
  ram_run->callback([&] {
    MachineConfig cfg;
    auto [p, input] = run_args.load(cfg, io);
    ExecOptions opts;
    opts.record = false;
    RunResult r = execute(p, input, cfg, opts);
    emit(std::string(to_string(r.outcome)) + " R0=" + r.state.real(0).str() + "\n", out_path, io);
  });

  RunArgs trace_args;
  auto* ram_trace = ram->add_subcommand("trace", "execute and print one line per step");
  trace_args.add(ram_trace);
  ram_trace->callback([&] {
    MachineConfig cfg;
    auto [p, input] = trace_args.load(cfg, io);
    RunResult r = execute(p, input, cfg);
    emit(export_trace(r.trace) + std::string(to_string(r.outcome)) + " steps=" + std::to_string(r.steps) + "\n",
         out_path, io);
  });

  RunArgs bit_args;
  unsigned wmax = 48;
  bool shadow = false;
  auto* ram_bit = ram->add_subcommand("bit", "snapped input bit complexity (and the degree monitor with --shadow)");
  bit_args.add(ram_bit);
  ram_bit->add_option("--wmax", wmax, "largest snapping exponent tried")->check(CLI::Range(1, 4096));
  ram_bit->add_flag("--shadow", shadow, "also track degree, dimension and coefficient bounds (no RSQRT)");
  ram_bit->callback([&] {
    MachineConfig cfg;
    auto [p, input] = bit_args.load(cfg, io);
    ExecOptions opts;
    opts.record = false;
    RunResult r = execute(p, input, cfg, opts);
    Json j;
    j["program"] = p.name;
    j["outcome"] = to_string(r.outcome);
    j["input_bits"] = input_bit_length(input);
    auto b = snapped_bit_complexity(p, input, cfg, wmax);
    j["snapped_bit_complexity"] = b ? Json(*b) : Json(nullptr);
    j["wmax"] = wmax;
    if (shadow) {
      ShadowReport s = shadow_execute(p, input, cfg);
      std::uint64_t observed = 0;
      for (const auto& o : s.observations) observed = std::max(observed, o.bits);
      j["shadow"] = {{"degree", s.degree},           {"dimension", s.dimension},
                     {"max_coef", s.max_coef.get_str()}, {"growth_bound", s.growth_bound},
                     {"max_observed_bits", observed},  {"writes", s.observations.size()}};
    }
    emit_json(j, out_path, io);
  });

  // etr ---------------------------------------------------------------------------
  auto* etr = app.add_subcommand("etr", "compile programs to existential formulas")->require_subcommand(1);

  CompileArgs compile_args;
  std::string format = "native", witness_out;
  bool check_witness = false;
  auto* etr_compile = etr->add_subcommand("compile", "build the formula; print its size, optionally check the trace witness");
  compile_args.add(etr_compile);
  etr_compile->add_option("--format", format, "formula text written to --out")->check(CLI::IsMember({"native", "smtlib"}));
  etr_compile->add_flag("--check-witness", check_witness, "evaluate the formula at the witness built from the run");
  etr_compile->add_option("--witness-out", witness_out, "write the trace witness assignment here");
  etr_compile->callback([&] {
    auto l = compile_args.load(io);
    CompiledFormula cf = compile(l.program, l.instance, l.budget);
    FormulaStats s = cf.formula.stats();
    out << "variables=" << s.variables << " nodes=" << s.nodes << " depth=" << s.depth << "\n";
    if (!out_path.empty()) emit(format == "smtlib" ? export_smtlib(cf.formula) : to_text(cf.formula), out_path, io);
    if (!check_witness && witness_out.empty()) return;
    RunResult r = execute(l.program, rram::etr::detail::certificate_input(l.instance, l.cert), l.budget.machine());
    Assignment a = witness_from_trace(l.program, l.instance, l.cert, r.trace, l.budget);
    if (!witness_out.empty()) emit(export_assignment(cf.formula, a), witness_out, io);
    if (check_witness) {
      bool value = evaluate(cf.formula, a);
      out << "outcome=" << to_string(r.outcome) << " steps=" << r.steps << "\n";
      out << "formula=" << (value ? "TRUE" : "FALSE") << " under trace witness\n";
      if (value != (r.outcome == Outcome::Accept)) {
        err << "error: formula value disagrees with the run outcome\n";
        status = 1;
      }
    }
  });

  std::string formula_path, assignment_path;
  auto* etr_check = etr->add_subcommand("check-witness", "evaluate a formula file at an assignment file; exit 0 iff TRUE");
  etr_check->add_option("--formula", formula_path, "formula, native or SMT-LIB")->required();
  etr_check->add_option("--assignment", assignment_path, "lines 'name value'")->required();
  etr_check->callback([&] {
    std::string text = slurp(formula_path, io);
    Formula f = text.find("(set-logic") != std::string::npos || text.find("(assert") != std::string::npos
                    ? parse_smtlib(text)
                    : parse_formula(text);
    Assignment a = parse_assignment(slurp(assignment_path, io));
    bool value = evaluate(f, a);
    out << "formula=" << (value ? "TRUE" : "FALSE") << "\n";
    if (!value) status = 1;
  });

  CompileArgs smt_args;
  auto* etr_smt = etr->add_subcommand("export-smt", "write the formula as SMT-LIB QF_NRA");
  smt_args.add(etr_smt);
  etr_smt->callback([&] {
    auto l = smt_args.load(io);
    emit(export_smtlib(compile(l.program, l.instance, l.budget).formula), out_path, io);
  });

  CompileArgs stats_args;
  auto* etr_stats = etr->add_subcommand("stats", "formula size report (JSON)");
  stats_args.add(etr_stats);
  etr_stats->callback([&] {
    auto l = stats_args.load(io);
    Json j = stats_json(compile(l.program, l.instance, l.budget));
    j["program"] = l.program.name;
    emit_json(j, out_path, io);
  });

  // lab ---------------------------------------------------------------------------
  auto* lab = app.add_subcommand("lab", "hitting cubes, sign flips and smoothed bit complexity")->require_subcommand(1);

  unsigned hc_d = 1, hc_degree = 1, hc_bound = 8;
  std::uint64_t hc_k = 4, hc_polys = 100, hc_seed = 0;
  std::string hc_poly;
  auto* lab_hc = lab->add_subcommand("hitting-cubes", "count grid cubes met by random varieties against the bound");
  lab_hc->add_option("--d", hc_d, "dimension")->check(CLI::Range(1, 3));
  lab_hc->add_option("--degree", hc_degree, "degree")->check(CLI::Range(1, 16));
  lab_hc->add_option("--k", hc_k, "grid side")->required()->check(CLI::Range(1, 64));
  lab_hc->add_option("--polys", hc_polys, "number of random polynomials");
  lab_hc->add_option("--coef-bound", hc_bound, "coefficient numerators in [-b, b]");
  lab_hc->add_option("--poly", hc_poly, "count this polynomial instead of random ones");
  lab_hc->add_option("--seed", hc_seed, "master seed")->required();
  lab_hc->callback([&] {
    std::vector<lab::MultiPoly> polys;
    if (!hc_poly.empty()) {
      polys.push_back(lab::parse_poly(hc_poly, hc_d));
      hc_degree = std::max(1u, polys[0].degree());
    } else {
      for (std::uint64_t i = 0; i < hc_polys; ++i) {
        Rng rng = Rng::stream(hc_seed, i);
        polys.push_back(lab::random_poly(rng, hc_d, hc_degree, static_cast<long>(hc_bound)));
      }
    }
    Integer bound = lab::hitting_bound(hc_d, hc_degree, hc_k);
    Json j;
    j["seed"] = hc_seed;
    j["rng"] = kRngScheme;
    j["d"] = hc_d;
    j["degree"] = hc_degree;
    j["k"] = hc_k;
    j["bound"] = bound.get_str();
    j["recursion_bound"] = lab::recursion_bound(hc_d, hc_degree, hc_k).get_str();
    Json cases = Json::array();
    std::size_t worst = 0;
    bool pass = true, all_exact = true;
    for (const auto& p : polys) {
      auto c = lab::count_intersected_cubes(p, hc_k);
      worst = std::max(worst, c.count);
      pass = pass && Integer(static_cast<unsigned long>(c.count)) <= bound;
      all_exact = all_exact && c.exact;
      cases.push_back({{"poly", p.str()}, {"count", c.count}, {"exact", c.exact}, {"method", c.method}});
    }
    j["max_count"] = worst;
    j["exact"] = all_exact;
    j["pass"] = pass;
    j["cases"] = cases;
    j["wall_ms"] = wall();
    emit_json(j, out_path, io);
    if (!pass) status = 1;
  });

  std::string sf_p, sf_q = "1", sf_g;
  lab::SignFlipConfig sf;
  std::string sf_delta = "1/2";
  auto* lab_sf = lab->add_subcommand("sign-flip", "Monte Carlo sign-flip probability of p/q under snapping");
  lab_sf->add_option("--p", sf_p, "numerator polynomial")->required();
  lab_sf->add_option("--q", sf_q, "denominator polynomial");
  lab_sf->add_option("--g", sf_g, "unperturbed point, e.g. \"1/2 1/3\"")->required();
  lab_sf->add_option("--delta", sf_delta, "perturbation width");
  lab_sf->add_option("--word-size", sf.w, "snapping exponent w (grid 2^-w)")->check(CLI::Range(1, 256));
  lab_sf->add_option("--trials", sf.trials, "number of trials")->check(CLI::PositiveNumber);
  lab_sf->add_option("--resolution", sf.resolution, "perturbation lattice exponent")->check(CLI::Range(1, 256));
  lab_sf->add_option("--seed", sf.seed, "master seed")->required();
  lab_sf->callback([&] {
    auto g = rationals(sf_g);
    sf.delta = Rational::parse(sf_delta);
    auto r = lab::sign_flip_probability(lab::parse_poly(sf_p, g.size()), lab::parse_poly(sf_q, g.size()), g, sf);
    Json j;
    j["seed"] = r.seed;
    j["rng"] = kRngScheme;
    j["p"] = sf_p;
    j["q"] = sf_q;
    j["delta"] = rat(sf.delta);
    j["w"] = sf.w;
    j["trials"] = r.trials;
    j["flips"] = r.flips;
    j["estimate"] = r.estimate;
    j["ci99"] = {r.ci_low, r.ci_high};
    j["bound"] = rat(r.bound);
    j["bound_value"] = r.bound_value;
    j["inner"] = {{"trials", r.inner_trials}, {"flips", r.inner_flips}};
    j["perimeter"] = {{"trials", r.perimeter_trials}, {"flips", r.perimeter_flips}};
    j["clamped"] = r.clamped;
    j["pass"] = r.pass;
    j["wall_ms"] = wall();
    emit_json(j, out_path, io);
    if (!r.pass) status = 1;
  });

  lab::SmoothedConfig sm;
  std::string sm_delta = "1/4", sm_points;
  std::size_t sm_n = 4;
  auto* lab_sm = lab->add_subcommand("smoothed-bit", "mean snapped bit complexity of the order-type verifier");
  lab_sm->add_option("--points", sm_points, "unperturbed point file (default: n collinear points)");
  lab_sm->add_option("--n", sm_n, "number of collinear points when --points is absent")->check(CLI::Range(3, 64));
  lab_sm->add_option("--delta", sm_delta, "perturbation width");
  lab_sm->add_option("--trials", sm.trials, "number of trials")->check(CLI::PositiveNumber);
  lab_sm->add_option("--wcap", sm.wcap, "largest snapping exponent tried")->check(CLI::Range(1, 4096));
  lab_sm->add_option("--seed", sm.seed, "master seed")->required();
  lab_sm->callback([&] {
    auto pts = sm_points.empty() ? geo::collinear_points(sm_n) : points_arg(sm_points, io);
    if (pts.size() < 3) throw Error(ErrorKind::PreconditionViolated, "order type needs at least 3 points");
    sm.delta = Rational::parse(sm_delta);
    auto profile = geo::order_type_profile(pts.size());
    auto r = lab::smoothed_bit_experiment(geo::order_type_program(), profile, geo::order_type_input(pts),
                                          geo::order_type_machine(), sm);
    Json j;
    j["seed"] = r.seed;
    j["rng"] = kRngScheme;
    j["algorithm"] = "order_type";
    j["n"] = pts.size();
    j["profile"] = {{"d", profile.d}, {"degree", profile.degree}, {"polys", profile.polys.get_str()}};
    j["delta"] = rat(sm.delta);
    j["trials"] = r.trials;
    j["mean"] = r.estimate;
    j["ci99"] = {r.ci_low, r.ci_high};
    j["stddev"] = r.stddev;
    j["max"] = r.max;
    j["unresolved"] = r.unresolved;
    j["clamped"] = r.clamped;
    j["bound"] = r.bound;
    j["pass"] = r.pass;
    j["samples"] = r.samples;
    j["wall_ms"] = wall();
    emit_json(j, out_path, io);
    if (!r.pass) status = 1;
  });

  unsigned b_d = 1, b_degree = 1, b_w = 0;
  std::uint64_t b_k = 0;
  std::string b_polys = "1", b_delta;
  auto* lab_bounds = lab->add_subcommand("bounds", "evaluate the closed-form bounds");
  lab_bounds->add_option("--d", b_d, "dimension")->check(CLI::Range(1, 64));
  lab_bounds->add_option("--degree", b_degree, "degree")->check(CLI::Range(1, 64));
  lab_bounds->add_option("--k", b_k, "grid side for the hitting bound");
  lab_bounds->add_option("--polys", b_polys, "polynomial count C");
  lab_bounds->add_option("--delta", b_delta, "perturbation width");
  lab_bounds->add_option("--word-size", b_w, "snapping exponent for the sign-flip bound");
  lab_bounds->callback([&] {
    Json j;
    j["d"] = b_d;
    j["degree"] = b_degree;
    if (b_k) {
      j["k"] = b_k;
      j["hitting_bound"] = lab::hitting_bound(b_d, b_degree, b_k).get_str();
      j["recursion_bound"] = lab::recursion_bound(b_d, b_degree, b_k).get_str();
    }
    if (!b_delta.empty()) {
      Rational delta = Rational::parse(b_delta);
      j["delta"] = rat(delta);
      j["expected_bit_bound"] = lab::expected_bit_bound(b_d, b_degree, Integer(b_polys), delta);
      if (b_w) j["sign_flip_bound"] = rat(lab::sign_flip_bound(b_d, b_degree, b_w, delta));
    }
    emit_json(j, out_path, io);
  });

  // geo ---------------------------------------------------------------------------
  auto* geo = app.add_subcommand("geo", "geometric verifiers and resource augmentation")->require_subcommand(1);

  std::string ot_points;
  bool ot_program = false;
  auto* geo_ot = geo->add_subcommand("order-type", "orientation of every triple: 'i j k sign'");
  geo_ot->add_option("--points", ot_points, "point file, '-' for stdin")->required();
  geo_ot->add_flag("--via-program", ot_program, "compute with the real RAM verifier");
  geo_ot->callback([&] {
    auto pts = points_arg(ot_points, io);
    emit(geo::export_chirotope(ot_program ? geo::order_type_by_program(pts) : geo::order_type(pts)), out_path, io);
  });

  std::string dg_points, dg_radius;
  auto* geo_dg = geo->add_subcommand("disk-graph", "edges 'i j' of the closed disk intersection graph");
  geo_dg->add_option("--points", dg_points, "centre file, '-' for stdin")->required();
  geo_dg->add_option("--radius", dg_radius, "common radius")->required();
  geo_dg->callback([&] {
    std::string text;
    for (auto [i, j] : geo::unit_disk_graph(points_arg(dg_points, io), Rational::parse(dg_radius)))
      text += std::to_string(i) + " " + std::to_string(j) + "\n";
    emit(text, out_path, io);
  });

  std::string rot_target, rot_anchor;
  unsigned rot_w = 8;
  auto* geo_rot = geo->add_subcommand("rotate", "rational point of the unit circle near a direction");
  geo_rot->add_option("--target", rot_target, "\"a b\" near the unit circle")->required();
  geo_rot->add_option("--word-size", rot_w, "rounding exponent w")->check(CLI::Range(1, 4096));
  geo_rot->add_option("--anchor", rot_anchor, "axis vector to rotate through (default: opposite quantile)");
  geo_rot->callback([&] {
    geo::Point t = point_arg(rot_target, "--target");
    geo::Rotation r = rot_anchor.empty() ? geo::rational_rotation(t, rot_w)
                                         : geo::rotate_through_anchor(t, point_arg(rot_anchor, "--anchor"), rot_w);
    emit("point=" + point_str(r.point) + "\nanchor=" + point_str(r.anchor) + "\nrounded=" + point_str(r.rounded) + "\n",
         out_path, io);
  });

  std::string ps_packing, ps_eps, ps_report;
  auto* geo_ps = geo->add_subcommand("pack-shift", "spread a packing into width 1 + alpha + eps");
  geo_ps->add_option("--packing", ps_packing, "packing file, '-' for stdin")->required();
  geo_ps->add_option("--epsilon", ps_eps, "extra container width")->required();
  geo_ps->add_option("--report", ps_report, "write a JSON summary here");
  geo_ps->callback([&] {
    auto r = geo::pack_shift(geo::parse_packing(slurp(ps_packing, io)), Rational::parse(ps_eps));
    emit(geo::format_packing(r.packing), out_path, io);
    if (ps_report.empty()) return;
    Json j;
    j["pieces"] = r.packing.pieces.size();
    j["width"] = rat(r.packing.width);
    j["grid"] = rat(r.grid);
    j["separation"] = rat(r.separation);
    j["pi_x"] = r.order.pi_x;
    j["pi_y"] = r.order.pi_y;
    emit_json(j, ps_report, io);
  });

  std::string inf_polygon, inf_alpha;
  unsigned inf_w = 32;
  auto* geo_inf = geo->add_subcommand("inflate", "push every edge of a convex polygon outward by alpha");
  geo_inf->add_option("--polygon", inf_polygon, "file with one polygon 'x1 y1 x2 y2 ...', '-' for stdin")->required();
  geo_inf->add_option("--alpha", inf_alpha, "offset")->required();
  geo_inf->add_option("--word-size", inf_w, "rotation exponent for irrational normals")->check(CLI::Range(1, 4096));
  geo_inf->callback([&] {
    auto polys = geo::parse_polygons(slurp(inf_polygon, io));
    if (polys.size() != 1) throw UsageError("--polygon must hold exactly one polygon");
    auto r = geo::edge_inflate(polys[0], Rational::parse(inf_alpha), inf_w);
    emit(geo::format_polygon(r.polygon) + "\nrationalized=" + (r.rationalized ? "true" : "false") + "\n", out_path, io);
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return status;
}

}  // namespace rram::cli
