#pragma once

#include <array>
#include <sstream>
#include <string>
#include <vector>

#include "rram/exact/rational.hpp"
#include "rram/lab/experiments.hpp"
#include "rram/ram/machine.hpp"
#include "rram/ram/program.hpp"

namespace rram::geo {

struct Point {
  Rational x, y;
  bool operator==(const Point&) const = default;
  friend std::ostream& operator<<(std::ostream& os, const Point& p) { return os << "(" << p.x << ", " << p.y << ")"; }
};

inline Point operator+(const Point& a, const Point& b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y}; }
inline Rational cross(const Point& a, const Point& b) { return a.x * b.y - a.y * b.x; }
inline Rational dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y; }

/// Sign of det [[1, ax, ay], [1, bx, by], [1, cx, cy]]: +1 counterclockwise, 0 collinear.
inline int orientation(const Point& a, const Point& b, const Point& c) { return cross(b - a, c - a).sign(); }

struct TripleSign {
  std::size_t i, j, k;
  int sign;
  bool operator==(const TripleSign&) const = default;
};

/// Orientation of every triple i < j < k, in lexicographic order.
using Chirotope = std::vector<TripleSign>;

inline Chirotope order_type(const std::vector<Point>& pts) {
  if (pts.size() < 3) throw Error(ErrorKind::PreconditionViolated, "order type needs at least 3 points");
  Chirotope chi;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (std::size_t k = j + 1; k < pts.size(); ++k) chi.push_back({i, j, k, orientation(pts[i], pts[j], pts[k])});
  return chi;
}

inline std::string export_chirotope(const Chirotope& chi) {
  std::string out;
  for (const auto& t : chi)
    out += std::to_string(t.i) + " " + std::to_string(t.j) + " " + std::to_string(t.k) + " " + std::to_string(t.sign) +
           "\n";
  return out;
}

/// Closed disks of radius r: an edge whenever the centres are at most 2r apart.
inline std::vector<std::pair<std::size_t, std::size_t>> unit_disk_graph(const std::vector<Point>& centers,
                                                                        const Rational& r) {
  if (r.sign() <= 0) throw Error(ErrorKind::PreconditionViolated, "radius must be positive");
  Rational reach = Rational(4) * r * r;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j) {
      Point d = centers[i] - centers[j];
      if (dot(d, d) <= reach) edges.emplace_back(i, j);
    }
  return edges;
}

inline Integer choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  Integer r = 1;
  for (std::uint64_t i = 0; i < k; ++i) r = r * Integer(static_cast<unsigned long>(n - i)) / Integer(static_cast<unsigned long>(i + 1));
  return r;
}

inline lab::AlgorithmProfile order_type_profile(std::size_t n) { return {6, 2, 1, choose(n, 3)}; }
inline lab::AlgorithmProfile disk_graph_profile(std::size_t n) { return {4, 2, 1, choose(n, 2)}; }

// the order type as a real RAM program ------------------------------------------------

inline constexpr std::uint64_t kOrderTypeOutput = 64;  // W[64 + t] holds the sign code of the t-th triple
inline constexpr unsigned kOrderTypeWordSize = 12;

/// Input: W0 = n, R[2i], R[2i+1] = point i. For each triple i < j < k in lexicographic
/// order the program stores 0 (collinear), 1 (counterclockwise) or 2 (clockwise).
inline Program order_type_program() {
  static const char* text = R"(.name order_type
      WCONST 4 1
      WCONST 5 2
      WCONST 7 64
      WCONST 1 0
iloop: WADD 2 1 4
jloop: WADD 3 2 4
kloop: WJLT 3 0 body
      WADD 2 2 4
      WJLT 2 0 jloop
      WADD 1 1 4
      WJLT 1 0 iloop
      HALT
body: WMULLO 6 1 5
      RLOAD 1000 6
      WADD 6 6 4
      RLOAD 1001 6
      WMULLO 6 2 5
      RLOAD 1002 6
      WADD 6 6 4
      RLOAD 1003 6
      WMULLO 6 3 5
      RLOAD 1004 6
      WADD 6 6 4
      RLOAD 1005 6
      RSUB 1006 1002 1000
      RSUB 1007 1005 1001
      RMUL 1008 1006 1007
      RSUB 1006 1003 1001
      RSUB 1007 1004 1000
      RMUL 1009 1006 1007
      RSUB 1010 1008 1009
      WCONST 8 0
      RJZ 1010 emit
      WCONST 8 1
      RJPOS 1010 emit
      WCONST 8 2
emit: WSTORE 7 8
      WADD 7 7 4
      WADD 3 3 4
      GOTO kloop
)";
  return parse_program(text);
}

inline Input order_type_input(const std::vector<Point>& pts) {
  Input in;
  for (const auto& p : pts) {
    in.reals.push_back(p.x);
    in.reals.push_back(p.y);
  }
  in.words.push_back(pts.size());
  return in;
}

inline MachineConfig order_type_machine() {
  MachineConfig cfg;
  cfg.w = kOrderTypeWordSize;
  return cfg;
}

/// Runs order_type_program and decodes the stored sign codes.
inline Chirotope order_type_by_program(const std::vector<Point>& pts) {
  if (pts.size() < 3) throw Error(ErrorKind::PreconditionViolated, "order type needs at least 3 points");
  ExecOptions quiet;
  quiet.record = false;
  RunResult r = execute(order_type_program(), order_type_input(pts), order_type_machine(), quiet);
  Chirotope chi;
  std::uint64_t slot = kOrderTypeOutput;
  const int decode[] = {0, 1, -1};
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (std::size_t k = j + 1; k < pts.size(); ++k) chi.push_back({i, j, k, decode[r.state.W[slot++]]});
  return chi;
}

/// n >= 2 points on the line y = x/3 + 1/3, x evenly spaced in [1/4, 3/4]: every triple is collinear.
inline std::vector<Point> collinear_points(std::size_t n) {
  if (n < 2) throw Error(ErrorKind::PreconditionViolated, "need at least 2 points");
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) {
    Rational x = Rational(1, 4) + Rational(Integer(static_cast<unsigned long>(i)), Integer(2 * static_cast<unsigned long>(n - 1)));
    pts.push_back({x, x / Rational(3) + Rational(1, 3)});
  }
  return pts;
}

// files -----------------------------------------------------------------------

/// One point per line, "x y" as rational literals; '#' starts a comment.
inline std::vector<Point> parse_points(std::string_view text) {
  std::vector<Point> pts;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a)) continue;
    if (!(ls >> b) || (ls >> extra))
      throw Error(ErrorKind::ParseError, "points line " + std::to_string(lineno) + ": expected 'x y'");
    pts.push_back({Rational::parse(a), Rational::parse(b)});
  }
  return pts;
}

}  // namespace rram::geo
