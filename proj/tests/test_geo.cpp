#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "rram/geo/packing.hpp"

using namespace rram;
using namespace rram::geo;

namespace {
Rational q(const char* s) { return Rational::parse(s); }
Point pt(const char* x, const char* y) { return {q(x), q(y)}; }

Rational rand_unit(Rng& rng, unsigned bits = 10) {
  return Rational(Integer(static_cast<unsigned long>(rng.below(1ull << bits))), pow2(bits));
}

std::vector<Point> rand_points(Rng& rng, std::size_t n) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({rand_unit(rng), rand_unit(rng)});
  return pts;
}

// exact unit-circle point at parameter t, reflected into any of the eight octants
Point circle_point(Rng& rng) {
  Rational t(Integer(static_cast<unsigned long>(rng.below(1u << 12))), Integer(1u << 12));
  Rational den = Rational(1) + t * t;
  Point p{(Rational(1) - t * t) / den, Rational(2) * t / den};
  if (rng.coin()) std::swap(p.x, p.y);
  if (rng.coin()) p.x = -p.x;
  if (rng.coin()) p.y = -p.y;
  return p;
}
}  // namespace

TEST(OrderType, Examples) {
  auto chi = order_type({pt("0", "0"), pt("1", "0"), pt("0", "1")});
  ASSERT_EQ(chi.size(), 1u);
  EXPECT_EQ(chi[0].sign, 1);
  EXPECT_EQ(order_type({pt("0", "0"), pt("1/2", "1/2"), pt("1", "1")})[0].sign, 0);
  EXPECT_EQ(order_type({pt("0", "0"), pt("0", "1"), pt("1", "0")})[0].sign, -1);
  EXPECT_THROW(order_type({pt("0", "0"), pt("1", "1")}), Error);
}

TEST(OrderType, ConvexPositionMatchesDeterminants) {
  std::vector<Point> sq = {pt("1/4", "1/4"), pt("3/4", "1/4"), pt("3/4", "3/4"), pt("1/4", "3/4")};
  auto chi = order_type(sq);
  ASSERT_EQ(chi.size(), 4u);
  for (const auto& t : chi) {
    const Point &a = sq[t.i], &b = sq[t.j], &c = sq[t.k];
    Rational det = b.x * c.y - b.y * c.x - a.x * c.y + a.y * c.x + a.x * b.y - a.y * b.x;
    EXPECT_EQ(t.sign, det.sign());
    EXPECT_EQ(t.sign, 1);  // counterclockwise listing
  }
}

TEST(OrderType, ProgramAgreesWithDirectEvaluation) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    auto pts = rand_points(rng, static_cast<std::size_t>(rng.range(3, 7)));
    if (trial % 4 == 0) pts.push_back({(pts[0].x + pts[1].x) / Rational(2), (pts[0].y + pts[1].y) / Rational(2)});
    EXPECT_EQ(order_type_by_program(pts), order_type(pts));
  }
}

TEST(OrderType, RelabelingPermutesTriples) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    auto pts = rand_points(rng, 6);
    std::vector<std::size_t> perm(pts.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    std::vector<Point> moved(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) moved[perm[i]] = pts[i];
    auto chi = order_type(pts), chi2 = order_type(moved);
    auto lookup = [&](std::size_t a, std::size_t b, std::size_t c) {
      // sign of the sorted triple times the parity of the sorting permutation
      std::array<std::size_t, 3> idx{a, b, c};
      int parity = 1;
      for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 2 - x; ++y)
          if (idx[y] > idx[y + 1]) {
            std::swap(idx[y], idx[y + 1]);
            parity = -parity;
          }
      for (const auto& t : chi2)
        if (t.i == idx[0] && t.j == idx[1] && t.k == idx[2]) return parity * t.sign;
      return 99;
    };
    for (const auto& t : chi) EXPECT_EQ(t.sign, lookup(perm[t.i], perm[t.j], perm[t.k]));
  }
}

TEST(DiskGraph, ClosedContact) {
  auto e = unit_disk_graph({pt("0", "0"), pt("1/2", "0")}, q("1/4"));
  ASSERT_EQ(e.size(), 1u);
  EXPECT_TRUE(unit_disk_graph({pt("0", "0"), pt("1/2", "1/1000")}, q("1/4")).empty());
  EXPECT_TRUE(unit_disk_graph({pt("1/2", "1/2")}, q("1/4")).empty());
  EXPECT_THROW(unit_disk_graph({pt("0", "0")}, Rational(0)), Error);
}

TEST(DiskGraph, RandomMatchesPairwise) {
  Rng rng(77);
  auto pts = rand_points(rng, 5);
  Rational r = q("1/5");
  auto e = unit_disk_graph(pts, r);
  std::size_t expect = 0;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) {
      Rational dx = pts[i].x - pts[j].x, dy = pts[i].y - pts[j].y;
      bool edge = dx * dx + dy * dy <= Rational(4) * r * r;
      expect += edge;
      EXPECT_EQ(edge, std::find(e.begin(), e.end(), std::make_pair(i, j)) != e.end());
    }
  EXPECT_EQ(e.size(), expect);
}

TEST(DiskGraph, Profiles) {
  auto ot = order_type_profile(4);
  EXPECT_EQ(ot.d, 6u);
  EXPECT_EQ(ot.degree, 2u);
  EXPECT_EQ(ot.polys, Integer(4));
  EXPECT_EQ(disk_graph_profile(5).polys, Integer(10));
}

TEST(Rotation, WorkedExample) {
  auto r = rotate_through_anchor(pt("7071/10000", "7071/10000"), pt("1", "0"), 4);
  EXPECT_EQ(r.rounded, pt("11/16", "3/4"));
  EXPECT_EQ(r.point, pt("119/169", "120/169"));
}

TEST(Rotation, Passthrough) {
  EXPECT_EQ(rational_rotation(pt("0", "1"), 8).point, pt("0", "1"));
  EXPECT_EQ(rational_rotation(pt("1", "0"), 8).point, pt("1", "0"));
  EXPECT_EQ(rational_rotation(pt("0", "-1"), 8).point, pt("0", "-1"));
  EXPECT_THROW(rational_rotation(pt("0", "0"), 8), Error);
  EXPECT_THROW(rational_rotation(pt("1/2", "1/2"), 8), Error);
}

TEST(Rotation, OppositeQuantileAnchor) {
  EXPECT_EQ(rational_rotation(pt("7071/10000", "7071/10000"), 4).anchor, pt("-1", "0"));
  EXPECT_EQ(rational_rotation(pt("-3/5", "4/5"), 4).anchor, pt("0", "-1"));
  EXPECT_EQ(rational_rotation(pt("-4/5", "-3/5"), 4).anchor, pt("1", "0"));
  EXPECT_EQ(rational_rotation(pt("3/5", "-4/5"), 4).anchor, pt("0", "1"));
  // on the anchor axis the line is the axis itself
  EXPECT_EQ(rational_rotation(pt("9/10", "0"), 4).point, pt("1", "0"));
}

TEST(Rotation, RandomTargetsOnCircle) {
  Rng rng(2024);
  for (unsigned w : {4u, 8u, 16u, 32u}) {
    Rational limit2 = pow2_rational(2 - 2 * static_cast<long>(w));
    for (int i = 0; i < 1000; ++i) {
      Point t = circle_point(rng);
      Point p = rational_rotation(t, w).point;
      ASSERT_EQ(dot(p, p), Rational(1)) << t.x.str() << " " << t.y.str();
      Point d = p - t;
      ASSERT_LE(dot(d, d), limit2) << w << " " << t.x.str() << " " << t.y.str();
      EXPECT_LE(bit_length(p.x), 6u * w + 16);
      EXPECT_LE(bit_length(p.y), 6u * w + 16);
    }
  }
}

TEST(Polygon, MakeValidates) {
  auto cw = ConvexPolygon::make({pt("0", "0"), pt("0", "1"), pt("1", "0")});
  EXPECT_EQ(orientation(cw.v[0], cw.v[1], cw.v[2]), 1);
  EXPECT_THROW(ConvexPolygon::make({pt("0", "0"), pt("1", "0"), pt("2", "0")}), Error);
  EXPECT_THROW(ConvexPolygon::make({pt("0", "0"), pt("2", "0"), pt("1", "1/4"), pt("1", "2")}), Error);
  EXPECT_THROW(ConvexPolygon::make({pt("0", "0"), pt("1", "0")}), Error);
}

TEST(CardinalOrder, SingleAndSeparated) {
  auto a = ConvexPolygon::make({pt("0", "0"), pt("1", "0"), pt("0", "1")});
  auto one = cardinal_order({a});
  EXPECT_EQ(one.pi_x, std::vector<std::size_t>{0});
  auto b = a.translated(pt("2", "0"));
  auto two = cardinal_order({b, a});
  EXPECT_EQ(two.pi_x, (std::vector<std::size_t>{1, 0}));
  EXPECT_THROW(cardinal_order({a, a}), Error);
}

TEST(CardinalOrder, InterleavedTriple) {
  auto lower = ConvexPolygon::make({pt("0", "0"), pt("4", "0"), pt("4", "4")});
  auto upper = ConvexPolygon::make({pt("0", "1"), pt("3", "4"), pt("0", "4")});
  auto right = ConvexPolygon::make({pt("5", "0"), pt("6", "0"), pt("6", "1"), pt("5", "1")});
  std::vector<ConvexPolygon> ps{lower, upper, right};
  auto co = cardinal_order(ps);
  EXPECT_LT(co.rank_x[1], co.rank_x[0]);
  EXPECT_LT(co.rank_x[0], co.rank_x[2]);
  EXPECT_LT(co.rank_y[0], co.rank_y[1]);
  Rng rng(8);
  EXPECT_TRUE(check_cardinal_order(ps, co, rng, 100));
  CardinalOrder bad = co;
  std::swap(bad.rank_x[0], bad.rank_x[1]);
  EXPECT_FALSE(check_cardinal_order(ps, bad, rng, 100));
}

TEST(CardinalOrder, RandomPackingsPassLineCheck) {
  Rng rng(40);
  for (int trial = 0; trial < 20; ++trial) {
    auto pk = random_packing(rng, static_cast<std::size_t>(rng.range(1, 12)), q("1/4"), trial % 2 == 0);
    std::vector<ConvexPolygon> placed;
    for (const auto& p : pk.pieces) placed.push_back(p.placed());
    auto co = cardinal_order(placed);
    EXPECT_TRUE(check_cardinal_order(placed, co, rng, 100));
  }
}

TEST(PackShift, SingleSquare) {
  Packing pk;
  pk.pieces.push_back({ConvexPolygon::make({pt("0", "0"), pt("1", "0"), pt("1", "1"), pt("0", "1")}), {}, {}});
  auto r = pack_shift(pk, q("3/10"));
  EXPECT_EQ(r.packing.width, q("13/10"));
  ASSERT_EQ(r.packing.pieces.size(), 1u);
  EXPECT_EQ(r.packing.pieces[0].translation, pt("1/10", "1/10"));
  validate_packing(r.packing);
}

TEST(PackShift, TwoTouchingSquares) {
  Packing pk;
  pk.width = Rational(2);
  auto sq = ConvexPolygon::make({pt("0", "0"), pt("1", "0"), pt("1", "1"), pt("0", "1")});
  pk.pieces.push_back({sq, pt("0", "0"), {}});
  pk.pieces.push_back({sq, pt("1", "0"), {}});
  Rational eps = q("1/3");
  auto r = pack_shift(pk, eps);
  // before rounding the gap is one slot eps/4
  auto co = r.order;
  Rational slot = eps / Rational(4);
  Point t0 = pk.pieces[0].translation + Point{slot * Rational(static_cast<long>(co.rank_x[0])), slot * Rational(static_cast<long>(co.rank_y[0]))};
  Point t1 = pk.pieces[1].translation + Point{slot * Rational(static_cast<long>(co.rank_x[1])), slot * Rational(static_cast<long>(co.rank_y[1]))};
  EXPECT_GE(polygon_dist2(sq.translated(t0), sq.translated(t1)), slot * slot);
  auto a = r.packing.pieces[0].placed(), b = r.packing.pieces[1].placed();
  EXPECT_GE(polygon_dist2(a, b), (eps / Rational(8)) * (eps / Rational(8)));
  validate_packing(r.packing);
}

TEST(PackShift, EmptyAndErrors) {
  Packing empty;
  auto r = pack_shift(empty, q("1/2"));
  EXPECT_TRUE(r.packing.pieces.empty());
  EXPECT_THROW(pack_shift(empty, Rational(0)), Error);

  auto sq = ConvexPolygon::make({pt("0", "0"), pt("1/2", "0"), pt("1/2", "1/2"), pt("0", "1/2")});
  Packing rot;
  rot.pieces.push_back({sq, pt("0", "0"), pt("3/5", "4/5")});
  try {
    pack_shift(rot, q("1/2"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RotationalPlacementUnsupported);
  }
  Packing overlap;
  overlap.pieces.push_back({sq, pt("0", "0"), {}});
  overlap.pieces.push_back({sq, pt("1/4", "1/4"), {}});
  try {
    pack_shift(overlap, q("1/2"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInputPacking);
  }
}

TEST(PackShift, RandomPackingsProperties) {
  Rng rng(91);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = static_cast<std::size_t>(rng.range(0, 16));
    Rational alpha(Integer(static_cast<long>(rng.range(0, 3))), Integer(4));
    Rational eps(Integer(1), Integer(static_cast<long>(rng.range(2, 40))));
    auto pk = random_packing(rng, n, alpha, trial % 3 == 0);
    auto r = pack_shift(pk, eps);
    ASSERT_EQ(r.packing.pieces.size(), n);
    EXPECT_EQ(r.packing.width, Rational(1) + alpha + eps);
    validate_packing(r.packing);
    Rational sep = eps / Rational(2 * static_cast<long>(n + 2));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        EXPECT_GE(polygon_dist2(r.packing.pieces[i].placed(), r.packing.pieces[j].placed()), sep * sep);
  }
}

TEST(PackingIO, Roundtrip) {
  Rng rng(3);
  auto pk = random_packing(rng, 5, q("1/8"), false);
  auto back = parse_packing(format_packing(pk));
  EXPECT_EQ(back.width, pk.width);
  ASSERT_EQ(back.pieces.size(), pk.pieces.size());
  for (std::size_t i = 0; i < pk.pieces.size(); ++i) {
    EXPECT_EQ(back.pieces[i].translation, pk.pieces[i].translation);
    EXPECT_EQ(back.pieces[i].shape.v, pk.pieces[i].shape.v);
  }
  EXPECT_THROW(parse_packing("piece 0 0 0 0 1 0 0 1\n"), Error);
}

TEST(Inflate, UnitSquare) {
  auto sq = ConvexPolygon::make({pt("0", "0"), pt("1", "0"), pt("1", "1"), pt("0", "1")});
  auto r = edge_inflate(sq, q("1/10"));
  EXPECT_FALSE(r.rationalized);
  std::vector<Point> expect = {pt("-1/10", "-1/10"), pt("11/10", "-1/10"), pt("11/10", "11/10"), pt("-1/10", "11/10")};
  EXPECT_EQ(r.polygon.v, expect);
  EXPECT_EQ(edge_inflate(sq, Rational(0)).polygon.v, sq.v);
  EXPECT_THROW(edge_inflate(sq, q("-1")), Error);
}

TEST(Inflate, PythagoreanEdgeIsExact) {
  auto tri = ConvexPolygon::make({pt("0", "0"), pt("4", "0"), pt("0", "3")});
  auto r = edge_inflate(tri, Rational(1));
  EXPECT_FALSE(r.rationalized);
  // hypotenuse 3x + 4y = 12 moves to 3x + 4y = 17
  for (std::size_t i = 1; i < 3; ++i) EXPECT_EQ(Rational(3) * r.polygon.v[i].x + Rational(4) * r.polygon.v[i].y, Rational(17));
}

TEST(Inflate, RightTriangleRationalizedHypotenuse) {
  Rational a = q("1/10");
  auto tri = ConvexPolygon::make({pt("0", "0"), pt("1", "0"), pt("0", "1")});
  auto r = edge_inflate(tri, a);
  EXPECT_TRUE(r.rationalized);
  ASSERT_EQ(r.polygon.v.size(), 3u);
  // half-planes y >= -a, x >= -a, x + y <= 1 + a*len with len the offset length of the (1,1) normal
  EXPECT_EQ(r.polygon.v[0], Point(-a, -a));
  Rational len = (r.polygon.v[1].x - Rational(1) - a) / a;
  EXPECT_EQ(r.polygon.v[1], Point(Rational(1) + a + a * len, -a));
  EXPECT_EQ(r.polygon.v[2], Point(-a, Rational(1) + a + a * len));
  EXPECT_LE(len * len, Rational(2));
  EXPECT_GE(len * len, Rational(2) - pow2_rational(-50));
}

TEST(Inflate, MonotoneContainment) {
  Rng rng(55);
  for (int trial = 0; trial < 40; ++trial) {
    auto poly = random_convex(rng, static_cast<std::size_t>(rng.range(3, 8)), Rational(1));
    Rational a1(Integer(static_cast<long>(rng.range(0, 8))), Integer(16));
    Rational a2 = a1 + Rational(Integer(static_cast<long>(rng.range(0, 8))), Integer(16));
    auto in1 = edge_inflate(poly, a1).polygon;
    auto in2 = ConvexPolygon::make(edge_inflate(poly, a2).polygon.v);
    for (const auto& v : poly.v) EXPECT_TRUE(in1.contains(v));
    for (const auto& v : in1.v) EXPECT_TRUE(in2.contains(v));
  }
}
