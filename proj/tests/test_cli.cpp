#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "rram_cli.hpp"

using rram::cli::Json;

namespace {

struct Result {
  int status;
  std::string out, err;
};

Result run(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  int status = rram::cli::run_command(args, in, out, err);
  return {status, out.str(), err.str()};
}

std::string fixture(const char* name) { return std::string(RRAM_SOURCE_DIR) + "/fixtures/" + name; }

std::string temp_file(const std::string& name, const std::string& content = "") {
  auto path = (std::filesystem::temp_directory_path() / ("rram_cli_" + name)).string();
  if (!content.empty()) {
    std::ofstream f(path);
    f << content;
  }
  return path;
}

}  // namespace

TEST(Ram, RunSumLoop) {
  auto r = run({"ram", "run", "--program", fixture("sum_loop.rram"), "--input", fixture("sum2.in"), "--word-size", "8"});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "HALT R0=5/6\n");
}

TEST(Ram, ProgramFromStdin) {
  auto r = run({"ram", "run", "--program", "-", "--reals", "1/2 1/3", "--words", "2"}, rram::read_text_file(fixture("sum_loop.rram")));
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "HALT R0=5/6\n");
}

TEST(Ram, TraceEndsWithOutcome) {
  auto r = run({"ram", "trace", "--program", fixture("eq.rram"), "--words", "3 3", "--word-size", "3"});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("WJEQ branch=1"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("ACCEPT steps=2\n"), std::string::npos) << r.out;
}

TEST(Ram, BitReport) {
  auto r = run({"ram", "bit", "--program", fixture("sum_loop.rram"), "--input", fixture("sum2.in"), "--shadow"});
  ASSERT_EQ(r.status, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["outcome"], "HALT");
  EXPECT_TRUE(j["snapped_bit_complexity"].is_number());
  EXPECT_EQ(j["shadow"]["degree"], 1);
  EXPECT_LE(j["shadow"]["max_observed_bits"].get<std::uint64_t>(), 16u);
}

TEST(Ram, DomainErrorsExitOne) {
  auto r = run({"ram", "run", "--program", fixture("missing.rram"), "--reals", "1"});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("ParseError"), std::string::npos);
  auto bad = run({"ram", "run", "--program", "-", "--reals", "1"}, "FROB 1 2\n");
  EXPECT_EQ(bad.status, 1);
}

TEST(Usage, ExitTwoAndNameTheFlag) {
  auto r = run({"ram", "run", "--input", fixture("sum2.in")});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("--program"), std::string::npos) << r.err;
  EXPECT_EQ(run({}).status, 2);
  EXPECT_EQ(run({"ram", "run", "--program", fixture("eq.rram"), "--word-size", "0"}).status, 2);
  EXPECT_EQ(run({"ram", "run", "--program", fixture("eq.rram"), "--input", fixture("sum2.in"), "--words", "1"}).status, 2);
  EXPECT_EQ(run({"--help"}).status, 0);
}

TEST(Etr, CompileCheckWitness) {
  auto r = run({"etr", "compile", "--program", fixture("eq.rram"), "--instance", "3 3", "--word-size", "3", "--steps", "4",
                "--check-witness"});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("formula=TRUE under trace witness"), std::string::npos) << r.out;
  auto rej = run({"etr", "compile", "--program", fixture("eq.rram"), "--instance", "3 4", "--word-size", "3", "--steps",
                  "4", "--check-witness"});
  EXPECT_EQ(rej.status, 0) << rej.err;
  EXPECT_NE(rej.out.find("formula=FALSE under trace witness"), std::string::npos);
}

TEST(Etr, CompileFilesRoundtripThroughCheckWitness) {
  std::string formula = temp_file("eq.etr"), witness = temp_file("eq.wit");
  auto r = run({"etr", "compile", "--program", fixture("eq.rram"), "--instance", "2 2", "--word-size", "3", "--steps", "3",
                "--out", formula, "--witness-out", witness});
  ASSERT_EQ(r.status, 0) << r.err;
  auto c = run({"etr", "check-witness", "--formula", formula, "--assignment", witness});
  EXPECT_EQ(c.status, 0) << c.err;
  EXPECT_EQ(c.out, "formula=TRUE\n");

  std::string smt = temp_file("eq.smt2");
  ASSERT_EQ(run({"etr", "export-smt", "--program", fixture("eq.rram"), "--instance", "2 2", "--word-size", "3", "--steps",
                 "3", "--out", smt})
                .status,
            0);
  EXPECT_EQ(run({"etr", "check-witness", "--formula", smt, "--assignment", witness}).status, 0);

  std::string rej = temp_file("eq_rej.wit");
  ASSERT_EQ(run({"etr", "compile", "--program", fixture("eq.rram"), "--instance", "2 3", "--word-size", "3", "--steps",
                 "3", "--out", formula, "--witness-out", rej})
                .status,
            0);
  auto f = run({"etr", "check-witness", "--formula", formula, "--assignment", rej});
  EXPECT_EQ(f.status, 1);
  EXPECT_EQ(f.out, "formula=FALSE\n");
}

TEST(Etr, StatsMatchGoldenCounts) {
  auto r = run({"etr", "stats", "--program", fixture("eq.rram"), "--instance", "3 3", "--word-size", "3", "--steps", "4"});
  ASSERT_EQ(r.status, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["variables"], 113);
  EXPECT_EQ(j["nodes"], 853);
  EXPECT_EQ(j["depth"], 9);
}

TEST(Lab, HittingCubesExample) {
  std::vector<std::string> args{"lab", "hitting-cubes", "--d", "2", "--degree", "2", "--k", "6", "--polys", "100", "--seed", "7"};
  auto r = run(args);
  ASSERT_EQ(r.status, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["bound"], "648");
  EXPECT_EQ(j["cases"].size(), 100u);
  for (const auto& c : j["cases"]) EXPECT_LE(c["count"].get<int>(), 648);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(run(args).out, r.out);  // byte-identical for identical argv
}

TEST(Lab, HittingCubesSinglePolynomial) {
  auto r = run({"lab", "hitting-cubes", "--d", "1", "--k", "6", "--poly", "(2*x - 1)*(2*x - 3)", "--seed", "0"});
  ASSERT_EQ(r.status, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["cases"][0]["count"], 2);
  EXPECT_TRUE(j["cases"][0]["exact"].get<bool>());
  // k below 2 degree + 2 violates the hypothesis
  EXPECT_EQ(run({"lab", "hitting-cubes", "--d", "1", "--degree", "2", "--k", "5", "--seed", "0"}).status, 1);
}

TEST(Lab, StochasticCommandsRequireSeed) {
  for (auto args : std::vector<std::vector<std::string>>{
           {"lab", "hitting-cubes", "--d", "1", "--k", "4"},
           {"lab", "sign-flip", "--p", "2*x - 1", "--g", "1/2"},
           {"lab", "smoothed-bit", "--n", "4"}}) {
    auto r = run(args);
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.err.find("--seed"), std::string::npos) << r.err;
  }
}

TEST(Lab, SignFlipReport) {
  std::vector<std::string> args{"lab", "sign-flip", "--p", "2*x - 1", "--g", "1/2", "--delta", "1/2", "--word-size", "10",
                                "--trials", "5000", "--seed", "1"};
  auto r = run(args);
  ASSERT_EQ(r.status, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["bound"], "3/64");
  EXPECT_EQ(j["wall_ms"], 0.0);
  EXPECT_EQ(run(args).out, r.out);
  args.push_back("--timing");
  EXPECT_GE(Json::parse(run(args).out)["wall_ms"].get<double>(), 0.0);
  EXPECT_EQ(run({"lab", "sign-flip", "--p", "x", "--q", "0", "--g", "1/2", "--seed", "1"}).status, 1);
}

TEST(Lab, SmoothedBitReport) {
  auto r = run({"lab", "smoothed-bit", "--n", "4", "--delta", "1/4", "--trials", "20", "--seed", "3"});
  ASSERT_EQ(r.status, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["bound"], 30);
  EXPECT_EQ(j["samples"].size(), 20u);
  EXPECT_LE(j["mean"].get<double>(), 30.0);
}

TEST(Lab, Bounds) {
  auto r = run({"lab", "bounds", "--d", "2", "--degree", "2", "--k", "6"});
  ASSERT_EQ(r.status, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["hitting_bound"], "648");
  EXPECT_EQ(j["recursion_bound"], "72");
}

TEST(Geo, OrderTypeBothRoutes) {
  std::string pts = "0 0\n1 0\n0 1\n1/2 1/2\n";
  auto a = run({"geo", "order-type", "--points", "-"}, pts);
  auto b = run({"geo", "order-type", "--points", "-", "--via-program"}, pts);
  ASSERT_EQ(a.status, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, 8), "0 1 2 1\n");
  EXPECT_NE(a.out.find("1 2 3 0\n"), std::string::npos);
  EXPECT_EQ(run({"geo", "order-type", "--points", "-"}, "0 0\n1 1\n").status, 1);
}

TEST(Geo, DiskGraph) {
  auto r = run({"geo", "disk-graph", "--points", "-", "--radius", "1/4"}, "0 0\n1/2 0\n1 1\n");
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "0 1\n");
}

TEST(Geo, RotateWorkedExample) {
  auto r = run({"geo", "rotate", "--target", "7071/10000 7071/10000", "--word-size", "4", "--anchor", "1 0"});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, 20), "point=119/169 120/16");
  EXPECT_EQ(run({"geo", "rotate", "--target", "1/2 1/2"}).status, 1);
  EXPECT_EQ(run({"geo", "rotate", "--target", "1/2"}).status, 2);
}

TEST(Geo, PackShiftSingleSquare) {
  std::string report = temp_file("shift.json");
  auto r = run({"geo", "pack-shift", "--packing", "-", "--epsilon", "3/10", "--report", report},
               "container 1\npiece 0 0 0 0 1 0 1 1 0 1\n");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "container 13/10\npiece 1/10 1/10 0 0 1 0 1 1 0 1\n");
  Json j = Json::parse(rram::read_text_file(report));
  EXPECT_EQ(j["separation"], "1/20");
  auto bad = run({"geo", "pack-shift", "--packing", "-", "--epsilon", "1/2"},
                 "container 1\npiece 0 0 0 0 1 0 1 1 0 1\npiece 1/2 0 0 0 1 0 1 1 0 1\n");
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.err.find("InvalidInputPacking"), std::string::npos);
}

TEST(Geo, InflateSquare) {
  std::string out = temp_file("inflated.txt");
  auto r = run({"geo", "inflate", "--polygon", "-", "--alpha", "1/10", "--out", out}, "0 0 1 0 1 1 0 1\n");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(rram::read_text_file(out), "-1/10 -1/10 11/10 -1/10 11/10 11/10 -1/10 11/10\nrationalized=false\n");
  auto tri = run({"geo", "inflate", "--polygon", "-", "--alpha", "1/10"}, "0 0 1 0 0 1\n");
  EXPECT_NE(tri.out.find("rationalized=true"), std::string::npos);
  EXPECT_EQ(run({"geo", "inflate", "--polygon", "-", "--alpha", "1"}, "0 0 1 0 2 0\n").status, 1);
}
