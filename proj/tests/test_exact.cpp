#include <gtest/gtest.h>

#include <cmath>

#include "rram/exact/grid.hpp"
#include "rram/exact/random.hpp"
#include "rram/exact/rational.hpp"

using namespace rram;

namespace {

Rational q(const char* s) { return Rational::parse(s); }

Rational random_rational(Rng& rng, bool nonzero = false) {
  for (;;) {
    Integer num = Integer(static_cast<long>(rng.range(-1000000, 1000000)));
    Integer den = Integer(static_cast<long>(rng.range(1, 1000000)));
    Rational r(num, den);
    if (!nonzero || !r.is_zero()) return r;
  }
}

}  // namespace

TEST(BitLength, Integers) {
  EXPECT_EQ(bit_length(Integer(5)), 3u);
  EXPECT_EQ(bit_length(Integer(1)), 1u);
  EXPECT_EQ(bit_length(Integer(0)), 1u);
  EXPECT_EQ(bit_length(Integer(1024)), 11u);
  EXPECT_EQ(bit_length(Integer(-5)), 3u);
}

TEST(BitLength, Rationals) {
  EXPECT_EQ(bit_length(q("3/2")), 4u);
  EXPECT_EQ(bit_length(Rational(0)), 2u);
  EXPECT_EQ(bit_length(q("7/12")), 7u);
  EXPECT_EQ(bit_length(q("14/24")), 7u);  // canonicalized first
}

TEST(RationalTest, CanonicalForm) {
  Rational r(Integer(6), Integer(-4));
  EXPECT_EQ(r.num(), -3);
  EXPECT_EQ(r.den(), 2);
  Rational z(Integer(0), Integer(-7));
  EXPECT_EQ(z.den(), 1);
  EXPECT_EQ(z.str(), "0");
  EXPECT_THROW(Rational(Integer(1), Integer(0)), Error);
}

TEST(RationalTest, Parse) {
  EXPECT_EQ(q("0.375"), q("3/8"));
  EXPECT_EQ(q("-0.5"), q("-1/2"));
  EXPECT_EQ(q("-1.25"), q("-5/4"));
  EXPECT_EQ(q(" 12 "), Rational(12));
  EXPECT_EQ(q("+3/9").str(), "1/3");
  EXPECT_EQ(q(".5"), q("1/2"));
  EXPECT_THROW(q("1/0"), Error);
  EXPECT_THROW(q("abc"), Error);
  EXPECT_THROW(q("1.2.3"), Error);
  EXPECT_THROW(q(""), Error);
}

TEST(RationalTest, DivisionByZeroKind) {
  try {
    (void)(Rational(1) / Rational(0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DivisionByZero);
  }
}

TEST(RationalTest, LargeUnsignedConstruction) {
  std::uint64_t big = ~std::uint64_t{0};
  Rational r(big);
  EXPECT_EQ(r.str(), "18446744073709551615");
}

TEST(RationalTest, RandomIdentitiesKeepCanonicalForm) {
  Rng rng(11);
  for (int it = 0; it < 2000; ++it) {
    Rational a = random_rational(rng);
    Rational b = random_rational(rng, true);
    Rational s = (a + b) - b;
    Rational p = (a * b) / b;
    EXPECT_EQ(s, a);
    EXPECT_EQ(p, a);
    for (const Rational* r : {&s, &p}) {
      Integer g;
      mpz_gcd(g.get_mpz_t(), r->num().get_mpz_t(), r->den().get_mpz_t());
      EXPECT_EQ(g, 1);
      EXPECT_GT(r->den(), 0);
    }
  }
}

TEST(RationalTest, FloorCeilLog) {
  EXPECT_EQ(floor(q("-3/2")), -2);
  EXPECT_EQ(ceil(q("-3/2")), -1);
  EXPECT_EQ(floor(q("7/2")), 3);
  EXPECT_EQ(ceil_log2(q("1")), 0);
  EXPECT_EQ(ceil_log2(q("5")), 3);
  EXPECT_EQ(ceil_log2(q("8")), 3);
  EXPECT_EQ(ceil_log2(q("1/8")), -3);
  EXPECT_EQ(ceil_log2(q("1/7")), -2);
  Rational root;
  EXPECT_TRUE(exact_sqrt(q("9/4"), root));
  EXPECT_EQ(root, q("3/2"));
  EXPECT_FALSE(exact_sqrt(q("2"), root));
}

TEST(Snap, Examples) {
  DyadicGrid g2(2);
  EXPECT_EQ(snap(q("5/16"), g2), q("1/4"));
  EXPECT_EQ(snap(q("3/8"), g2), q("1/2"));
  EXPECT_EQ(snap(q("1/4"), g2), q("1/4"));
  EXPECT_EQ(snap(q("1"), g2), q("1"));
  EXPECT_EQ(snap(q("0"), g2), q("0"));
  EXPECT_THROW(snap(q("-1/8"), g2), Error);
  EXPECT_THROW(snap(q("9/8"), g2), Error);
}

TEST(Snap, BitLengthOfGridPoints) {
  // numerator and denominator each need up to w+1 digits
  EXPECT_EQ(bit_length(snap(q("3/4"), DyadicGrid(2))), 5u);
  EXPECT_EQ(bit_length(snap(q("1/4"), DyadicGrid(2))), 4u);
}

TEST(Snap, IdempotentCloseAndShort) {
  Rng rng(5);
  for (unsigned w = 1; w <= 20; ++w) {
    DyadicGrid g(w);
    Rational half_step = pow2_rational(-static_cast<long>(w) - 1);
    for (int it = 0; it < 200; ++it) {
      Integer den(static_cast<unsigned long>(rng.range(1, 1 << 20)));
      Integer num(static_cast<unsigned long>(rng.below(den.get_ui() + 1)));
      Rational x(num, den);
      Rational s = snap(x, g);
      EXPECT_EQ(snap(s, g), s);
      EXPECT_LE((s - x).abs(), half_step);
      EXPECT_LE(bit_length(s.den()), w + bit_length(Integer(1)));
      EXPECT_LE(bit_length(s.num()), w + 1);
      EXPECT_LE(bit_length(s), 2 * w + 2);
    }
  }
}

TEST(SampleOffset, DegenerateAndRange) {
  Rng rng(1);
  PerturbationConfig zero(Rational(0));
  EXPECT_EQ(sample_offset(zero, rng), Rational(0));

  PerturbationConfig cfg(q("1/3"), 64, 9);
  Rational half = q("1/6");
  for (int i = 0; i < 10000; ++i) {
    Rational s = sample_offset(cfg, rng);
    EXPECT_LE(-half, s);
    EXPECT_LE(s, half);
    EXPECT_LE(s.den(), pow2(64));  // dyadic at resolution 2^-64
    Integer d = s.den();
    EXPECT_EQ(d & (d - 1), 0);
  }
  EXPECT_THROW(PerturbationConfig(q("3/2")), Error);
  EXPECT_THROW(PerturbationConfig(q("1/2"), 0), Error);
}

TEST(SampleOffset, MeanWithinFourSigma) {
  Rng rng = Rng::stream(2024, 0);
  PerturbationConfig cfg(q("1/2"));
  const int n = 100000;
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += sample_offset(cfg, rng).to_double();
  double mean = sum / n;
  double sigma = 0.5 / std::sqrt(12.0) / std::sqrt(static_cast<double>(n));
  EXPECT_LE(std::abs(mean), 4 * sigma);
}

TEST(SampleOffset, Deterministic) {
  PerturbationConfig cfg(q("1/4"));
  Rng a = Rng::stream(7, 3), b = Rng::stream(7, 3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_offset(cfg, a), sample_offset(cfg, b));
}

TEST(RngTest, BelowIsUniformOverSmallRange) {
  Rng rng(3);
  std::vector<int> counts(6, 0);
  for (int i = 0; i < 60000; ++i) ++counts[rng.below(std::uint64_t{6})];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
  Integer big = pow2(100) + 3;
  for (int i = 0; i < 100; ++i) EXPECT_LT(rng.below(big), big);
}
