#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>

#include "rram/exact/random.hpp"
#include "rram/geo/rotation.hpp"

namespace rram::geo {

/// Convex polygon, counterclockwise, no three consecutive vertices collinear.
struct ConvexPolygon {
  std::vector<Point> v;

  static ConvexPolygon make(std::vector<Point> pts) {
    if (pts.size() < 3) throw Error(ErrorKind::NonConvexInput, "a polygon needs at least 3 vertices");
    Rational area2(0);
    for (std::size_t i = 0; i < pts.size(); ++i) area2 = area2 + cross(pts[i], pts[(i + 1) % pts.size()]);
    if (area2.sign() < 0) std::reverse(pts.begin(), pts.end());
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i)
      if (orientation(pts[i], pts[(i + 1) % n], pts[(i + 2) % n]) <= 0)
        throw Error(ErrorKind::NonConvexInput, "polygon is not strictly convex at vertex " + std::to_string((i + 1) % n));
    // a strictly convex turn sequence can still wind twice; the total turn must be one revolution
    std::size_t minima = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Point &a = pts[(i + n - 1) % n], &b = pts[i], &c = pts[(i + 1) % n];
      if (a.y > b.y && c.y >= b.y) ++minima;
    }
    if (minima > 1) throw Error(ErrorKind::NonConvexInput, "polygon winds more than once");
    return ConvexPolygon{std::move(pts)};
  }

  ConvexPolygon translated(const Point& t) const {
    ConvexPolygon p = *this;
    for (auto& q : p.v) q = q + t;
    return p;
  }

  Rational min_x() const { return std::min_element(v.begin(), v.end(), [](auto& a, auto& b) { return a.x < b.x; })->x; }
  Rational max_x() const { return std::max_element(v.begin(), v.end(), [](auto& a, auto& b) { return a.x < b.x; })->x; }
  Rational min_y() const { return std::min_element(v.begin(), v.end(), [](auto& a, auto& b) { return a.y < b.y; })->y; }
  Rational max_y() const { return std::max_element(v.begin(), v.end(), [](auto& a, auto& b) { return a.y < b.y; })->y; }

  /// Closed polygon contains p.
  bool contains(const Point& p) const {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (orientation(v[i], v[(i + 1) % v.size()], p) < 0) return false;
    return true;
  }

  /// [lo, hi] of the horizontal line at height y inside the polygon, if it meets it.
  std::optional<std::pair<Rational, Rational>> slice_y(const Rational& y) const {
    std::optional<Rational> lo, hi;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Point &a = v[i], &b = v[(i + 1) % v.size()];
      if ((a.y - y).sign() * (b.y - y).sign() > 0) continue;
      std::vector<Rational> xs;
      if (a.y == b.y) {
        xs = {a.x, b.x};
      } else {
        xs = {a.x + (b.x - a.x) * (y - a.y) / (b.y - a.y)};
      }
      for (auto& x : xs) {
        if (!lo || x < *lo) lo = x;
        if (!hi || x > *hi) hi = x;
      }
    }
    if (!lo) return std::nullopt;
    return std::make_pair(*lo, *hi);
  }
};

/// Interiors are disjoint iff some edge normal separates the projections.
inline bool interiors_disjoint(const ConvexPolygon& p, const ConvexPolygon& q) {
  for (const ConvexPolygon* poly : {&p, &q}) {
    for (std::size_t i = 0; i < poly->v.size(); ++i) {
      Point e = poly->v[(i + 1) % poly->v.size()] - poly->v[i];
      Point n{e.y, -e.x};
      Rational pmin = dot(n, p.v[0]), pmax = pmin, qmin = dot(n, q.v[0]), qmax = qmin;
      for (const auto& x : p.v) {
        Rational d = dot(n, x);
        pmin = std::min(pmin, d);
        pmax = std::max(pmax, d);
      }
      for (const auto& x : q.v) {
        Rational d = dot(n, x);
        qmin = std::min(qmin, d);
        qmax = std::max(qmax, d);
      }
      if (pmax <= qmin || qmax <= pmin) return true;
    }
  }
  return false;
}

inline Rational point_segment_dist2(const Point& p, const Point& a, const Point& b) {
  Point ab = b - a, ap = p - a;
  Rational len2 = dot(ab, ab);
  Rational t = len2.is_zero() ? Rational(0) : dot(ap, ab) / len2;
  if (t.sign() < 0) t = Rational(0);
  if (t > Rational(1)) t = Rational(1);
  Point c{a.x + t * ab.x - p.x, a.y + t * ab.y - p.y};
  return dot(c, c);
}

/// Squared Euclidean distance between two polygons with disjoint interiors.
inline Rational polygon_dist2(const ConvexPolygon& p, const ConvexPolygon& q) {
  std::optional<Rational> best;
  auto scan = [&](const ConvexPolygon& a, const ConvexPolygon& b) {
    for (const auto& x : a.v)
      for (std::size_t i = 0; i < b.v.size(); ++i) {
        Rational d = point_segment_dist2(x, b.v[i], b.v[(i + 1) % b.v.size()]);
        if (!best || d < *best) best = d;
      }
  };
  scan(p, q);
  scan(q, p);
  return *best;
}

// packings ------------------------------------------------------------------------

struct Piece {
  ConvexPolygon shape;    // reference shape
  Point translation;      // placement = shape + translation
  std::optional<Point> rotation;  // (cos, sin) of a rotational placement; unsupported by pack_shift

  ConvexPolygon placed() const { return shape.translated(translation); }
};

/// Square container [0, width]^2 with width = 1 + alpha.
struct Packing {
  Rational width{1};
  std::vector<Piece> pieces;
};

inline void validate_packing(const Packing& pk) {
  std::vector<ConvexPolygon> placed;
  for (const auto& p : pk.pieces) placed.push_back(p.placed());
  for (std::size_t i = 0; i < placed.size(); ++i) {
    const auto& q = placed[i];
    if (q.min_x().sign() < 0 || q.min_y().sign() < 0 || q.max_x() > pk.width || q.max_y() > pk.width)
      throw Error(ErrorKind::InvalidInputPacking, "piece " + std::to_string(i) + " leaves the container");
    for (std::size_t j = i + 1; j < placed.size(); ++j)
      if (!interiors_disjoint(q, placed[j]))
        throw Error(ErrorKind::InvalidInputPacking,
                    "pieces " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
  }
}

struct CardinalOrder {
  std::vector<std::size_t> pi_x, pi_y;  // piece indices, first to last
  std::vector<std::size_t> rank_x, rank_y;  // 1-based rank of each piece
};

namespace detail {

// a before b along x: a horizontal line crosses both with a on the left, or a's x-range ends where b's starts
inline bool before_x(const ConvexPolygon& a, const ConvexPolygon& b) {
  Rational lo = std::max(a.min_y(), b.min_y()), hi = std::min(a.max_y(), b.max_y());
  if (lo < hi) {
    Rational y = (lo + hi) / Rational(2);
    auto sa = a.slice_y(y), sb = b.slice_y(y);
    return sa->second <= sb->first;
  }
  return a.max_x() <= b.min_x() && !(b.max_x() <= a.min_x());
}

inline ConvexPolygon transpose(const ConvexPolygon& p) {
  ConvexPolygon t;
  for (auto it = p.v.rbegin(); it != p.v.rend(); ++it) t.v.push_back({it->y, it->x});
  return t;
}

inline std::vector<std::size_t> topo_order(const std::vector<ConvexPolygon>& ps) {
  const std::size_t n = ps.size();
  std::vector<std::vector<std::size_t>> out(n);
  std::vector<std::size_t> indeg(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && before_x(ps[i], ps[j])) {
        out[i].push_back(j);
        ++indeg[j];
      }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (!indeg[i]) ready.push(i);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    std::size_t i = ready.top();
    ready.pop();
    order.push_back(i);
    for (std::size_t j : out[i])
      if (--indeg[j] == 0) ready.push(j);
  }
  if (order.size() != n) throw Error(ErrorKind::OverlappingPieces, "no consistent cardinal order exists");
  return order;
}

}  // namespace detail

/// Linear orders along x and y that extend domination and the crossing order on every axis-parallel line.
inline CardinalOrder cardinal_order(const std::vector<ConvexPolygon>& pieces) {
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (std::size_t j = i + 1; j < pieces.size(); ++j)
      if (!interiors_disjoint(pieces[i], pieces[j]))
        throw Error(ErrorKind::OverlappingPieces, "pieces " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
  CardinalOrder co;
  co.pi_x = detail::topo_order(pieces);
  std::vector<ConvexPolygon> t;
  for (const auto& p : pieces) t.push_back(detail::transpose(p));
  co.pi_y = detail::topo_order(t);
  co.rank_x.assign(pieces.size(), 0);
  co.rank_y.assign(pieces.size(), 0);
  for (std::size_t r = 0; r < pieces.size(); ++r) {
    co.rank_x[co.pi_x[r]] = r + 1;
    co.rank_y[co.pi_y[r]] = r + 1;
  }
  return co;
}

/// Checks the order on `lines` random horizontal and vertical lines: pieces met by a line appear in rank order.
inline bool check_cardinal_order(const std::vector<ConvexPolygon>& pieces, const CardinalOrder& co, Rng& rng,
                                 std::size_t lines = 100) {
  if (pieces.empty()) return true;
  Rational lo = pieces[0].min_y(), hi = pieces[0].max_y();
  for (const auto& p : pieces) {
    lo = std::min({lo, p.min_y(), p.min_x()});
    hi = std::max({hi, p.max_y(), p.max_x()});
  }
  for (std::size_t s = 0; s < lines; ++s) {
    Rational c = lo + (hi - lo) * Rational(Integer(static_cast<unsigned long>(rng.below(1u << 20))), Integer(1u << 20));
    for (bool vertical : {false, true}) {
      std::vector<std::pair<Rational, std::size_t>> hits;
      for (std::size_t i = 0; i < pieces.size(); ++i) {
        auto sl = vertical ? detail::transpose(pieces[i]).slice_y(c) : pieces[i].slice_y(c);
        if (sl && sl->first < sl->second) hits.emplace_back(sl->first, i);
      }
      std::sort(hits.begin(), hits.end());
      const auto& rank = vertical ? co.rank_y : co.rank_x;
      for (std::size_t h = 1; h < hits.size(); ++h)
        if (rank[hits[h - 1].second] > rank[hits[h].second]) return false;
    }
  }
  return true;
}

struct ShiftReport {
  Packing packing;
  Rational grid;        // rounding grid eps / (8 (n + 2))
  Rational separation;  // eps / (2 (n + 2)), guaranteed after rounding
  CardinalOrder order;
};

/// Spreads the pieces of a packing of width 1 + alpha into width 1 + alpha + eps: the piece of ranks
/// (i, j) moves by (i eps / (n+2), j eps / (n+2)), then each translation is rounded to the grid eps / (8(n+2)).
inline ShiftReport pack_shift(const Packing& in, const Rational& eps) {
  if (eps.sign() <= 0) throw Error(ErrorKind::InvalidConfig, "epsilon must be positive");
  for (const auto& p : in.pieces)
    if (p.rotation && !(p.rotation->x == Rational(1) && p.rotation->y.is_zero()))
      throw Error(ErrorKind::RotationalPlacementUnsupported, "pack_shift handles translations only");
  validate_packing(in);
  const std::size_t n = in.pieces.size();
  ShiftReport r;
  Rational slot = eps / Rational(static_cast<long>(n + 2));
  r.grid = slot / Rational(8);
  r.separation = slot / Rational(2);
  r.packing.width = in.width + eps;
  std::vector<ConvexPolygon> placed;
  for (const auto& p : in.pieces) placed.push_back(p.placed());
  r.order = cardinal_order(placed);
  for (std::size_t k = 0; k < n; ++k) {
    Piece p = in.pieces[k];
    Point t{p.translation.x + Rational(static_cast<long>(r.order.rank_x[k])) * slot,
            p.translation.y + Rational(static_cast<long>(r.order.rank_y[k])) * slot};
    auto round_to_grid = [&](const Rational& x) {
      return Rational(floor(x / r.grid + Rational(1, 2))) * r.grid;
    };
    p.translation = {round_to_grid(t.x), round_to_grid(t.y)};
    r.packing.pieces.push_back(p);
  }
  return r;
}

struct InflateResult {
  ConvexPolygon polygon;
  bool rationalized = false;  // some edge offset used a rational approximation of the unit normal
  unsigned w = 0;
};

/// Moves every edge line outward by alpha and intersects the shifted half-planes. For an
/// edge whose length is irrational the offset is alpha * (n . u) / |n|, with u = a rational unit
/// vector within 2^(1-w) of the unit normal; that offset is at most alpha and at least alpha cos(2^(1-w)).
inline InflateResult edge_inflate(const ConvexPolygon& poly, const Rational& alpha, unsigned w = 32) {
  if (alpha.sign() < 0) throw Error(ErrorKind::PreconditionViolated, "alpha must be >= 0");
  ConvexPolygon p = ConvexPolygon::make(poly.v);
  const std::size_t n = p.v.size();
  InflateResult res;
  res.w = w;
  if (alpha.is_zero()) {
    res.polygon = p;
    return res;
  }
  // edge i: dot(nrm[i], x) <= c[i], nrm the outward (unnormalised) normal
  std::vector<Point> nrm(n);
  std::vector<Rational> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    Point e = p.v[(i + 1) % n] - p.v[i];
    nrm[i] = {e.y, -e.x};
    Rational len2 = dot(nrm[i], nrm[i]);
    Rational len;
    if (!exact_sqrt(len2, len)) {
      // |n| * cos(theta) = n . u for the rational unit vector u
      Rational approx = Rational::from_mpq(mpq_class(std::sqrt(len2.to_double())));
      Point unit{nrm[i].x / approx, nrm[i].y / approx};
      Point u = rational_rotation(unit, w).point;
      len = dot(nrm[i], u);
      res.rationalized = true;
    }
    c[i] = dot(nrm[i], p.v[i]) + alpha * len;
  }
  ConvexPolygon out;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t a = (i + n - 1) % n, b = i;
    Rational det = nrm[a].x * nrm[b].y - nrm[a].y * nrm[b].x;
    out.v.push_back({(c[a] * nrm[b].y - nrm[a].y * c[b]) / det, (nrm[a].x * c[b] - c[a] * nrm[b].x) / det});
  }
  res.polygon = out;
  return res;
}

// random instances --------------------------------------------------------------

/// Strictly convex polygon with m vertices on the circle inscribed in [0, size]^2.
inline ConvexPolygon random_convex(Rng& rng, std::size_t m, const Rational& size) {
  std::vector<Rational> ts;
  while (ts.size() < m) {
    Rational t(Integer(static_cast<long>(rng.range(-64, 64))), Integer(16));
    if (std::find(ts.begin(), ts.end(), t) == ts.end()) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  const Rational half = size / Rational(2);
  std::vector<Point> pts;
  for (const auto& t : ts) {
    Rational den = Rational(1) + t * t;
    pts.push_back({half + half * (Rational(1) - t * t) / den, half + half * Rational(2) * t / den});
  }
  return ConvexPolygon::make(pts);
}

/// n pieces on a ceil(sqrt n) grid of cells in the container [0, 1 + alpha]^2. With `touching`
/// each piece is its full cell rectangle, so neighbours share edges.
inline Packing random_packing(Rng& rng, std::size_t n, const Rational& alpha, bool touching) {
  Packing pk;
  pk.width = Rational(1) + alpha;
  std::size_t k = 1;
  while (k * k < n) ++k;
  Rational cell = pk.width / Rational(static_cast<long>(k));
  std::vector<std::size_t> slots(k * k);
  std::iota(slots.begin(), slots.end(), 0);
  for (std::size_t i = slots.size(); i > 1; --i) std::swap(slots[i - 1], slots[rng.below(i)]);
  for (std::size_t p = 0; p < n; ++p) {
    Piece piece;
    Point corner{cell * Rational(static_cast<long>(slots[p] % k)), cell * Rational(static_cast<long>(slots[p] / k))};
    if (touching) {
      piece.shape = ConvexPolygon::make({{Rational(0), Rational(0)}, {cell, Rational(0)}, {cell, cell}, {Rational(0), cell}});
      piece.translation = corner;
    } else {
      piece.shape = random_convex(rng, static_cast<std::size_t>(rng.range(3, 7)), cell);
      piece.translation = corner;
    }
    pk.pieces.push_back(piece);
  }
  return pk;
}

// files -------------------------------------------------------------------------

inline std::vector<Point> parse_coords(std::istringstream& ls, std::size_t lineno) {
  std::vector<Point> pts;
  std::string a, b;
  while (ls >> a) {
    if (!(ls >> b)) throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": odd number of coordinates");
    pts.push_back({Rational::parse(a), Rational::parse(b)});
  }
  return pts;
}

/// One polygon per line: "x1 y1 x2 y2 ...".
inline std::vector<ConvexPolygon> parse_polygons(std::string_view text) {
  std::vector<ConvexPolygon> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    auto pts = parse_coords(ls, lineno);
    if (!pts.empty()) out.push_back(ConvexPolygon::make(pts));
  }
  return out;
}

inline std::string format_polygon(const ConvexPolygon& p) {
  std::string s;
  for (const auto& q : p.v) s += (s.empty() ? "" : " ") + q.x.str() + " " + q.y.str();
  return s;
}

/// "container W" once, then "piece tx ty x1 y1 x2 y2 ..." per piece.
inline Packing parse_packing(std::string_view text) {
  Packing pk;
  bool have_container = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "container") {
      std::string w, extra;
      if (!(ls >> w) || (ls >> extra)) throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": container W");
      pk.width = Rational::parse(w);
      have_container = true;
    } else if (kw == "piece") {
      auto pts = parse_coords(ls, lineno);
      if (pts.size() < 4) throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": piece needs a translation and 3 vertices");
      Piece p;
      p.translation = pts[0];
      p.shape = ConvexPolygon::make(std::vector<Point>(pts.begin() + 1, pts.end()));
      pk.pieces.push_back(p);
    } else {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": unknown keyword '" + kw + "'");
    }
  }
  if (!have_container) throw Error(ErrorKind::ParseError, "packing file has no container line");
  return pk;
}

inline std::string format_packing(const Packing& pk) {
  std::string s = "container " + pk.width.str() + "\n";
  for (const auto& p : pk.pieces)
    s += "piece " + p.translation.x.str() + " " + p.translation.y.str() + " " + format_polygon(p.shape) + "\n";
  return s;
}

}  // namespace rram::geo
