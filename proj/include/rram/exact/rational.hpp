#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>

#include "rram/error.hpp"

namespace rram {

using Integer = mpz_class;

/// Exact fraction kept in lowest terms with a positive denominator; zero is 0/1.
///
/// Thin value wrapper over GMP's mpq so the rest of the code never sees an
/// uncanonicalized fraction and never has to remember GMP calling conventions.
class Rational {
 public:
  Rational() = default;

  template <std::integral T>
  Rational(T value) : q_(to_integer(value)) {}  // NOLINT(implicit)

  Rational(const Integer& value) : q_(value) {}  // NOLINT(implicit)

  Rational(const Integer& num, const Integer& den) {
    if (den == 0) throw Error(ErrorKind::DivisionByZero, "rational with zero denominator");
    q_.get_num() = num;
    q_.get_den() = den;
    q_.canonicalize();
  }

  /// Accepts "p", "p/q" and finite decimals such as "-0.375" (converted exactly).
  static Rational parse(std::string_view text);

  static Rational from_mpq(const mpq_class& q) {
    Rational r;
    r.q_ = q;
    r.q_.canonicalize();
    return r;
  }

  const Integer& num() const { return q_.get_num(); }
  const Integer& den() const { return q_.get_den(); }
  const mpq_class& mpq() const { return q_; }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }

  Rational abs() const { return from_mpq(::abs(q_)); }

  double to_double() const { return q_.get_d(); }

  std::string str() const {
    if (is_integer()) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  Rational operator-() const { return from_mpq(-q_); }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw Error(ErrorKind::DivisionByZero, "rational division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  template <std::integral T>
  static Integer to_integer(T value) {
    if constexpr (std::is_signed_v<T>) return Integer(static_cast<long>(value));
    else return Integer(static_cast<unsigned long>(value));
  }

  mpq_class q_;
};

inline Integer floor(const Rational& r) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), r.num().get_mpz_t(), r.den().get_mpz_t());
  return out;
}

inline Integer ceil(const Rational& r) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), r.num().get_mpz_t(), r.den().get_mpz_t());
  return out;
}

inline Integer pow2(unsigned exponent) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), 2, exponent);
  return out;
}

/// 2^exponent as a rational; negative exponents give dyadic fractions.
inline Rational pow2_rational(long exponent) {
  if (exponent >= 0) return Rational(pow2(static_cast<unsigned>(exponent)));
  return Rational(Integer(1), pow2(static_cast<unsigned>(-exponent)));
}

/// Number of binary digits of |z|; zero counts as one digit.
inline std::uint64_t bit_length(const Integer& z) {
  return mpz_sizeinbase(z.get_mpz_t(), 2);
}

/// Length of the canonical p/q representation: BIT(p) + BIT(q).
inline std::uint64_t bit_length(const Rational& r) {
  return bit_length(r.num()) + bit_length(r.den());
}

/// Smallest integer e with 2^e >= x, for x > 0.
inline long ceil_log2(const Rational& x) {
  if (x.sign() <= 0) throw Error(ErrorKind::OutOfRange, "ceil_log2 of non-positive value");
  long e = static_cast<long>(bit_length(x.num())) - static_cast<long>(bit_length(x.den()));
  // 2^(e-1) < x < 2^(e+1) up to the digit-count slop; settle the exact edge.
  while (pow2_rational(e) < x) ++e;
  while (pow2_rational(e - 1) >= x) --e;
  return e;
}

/// Exact square root if r is the square of a rational.
inline bool exact_sqrt(const Rational& r, Rational& out) {
  if (r.sign() < 0) return false;
  Integer sn, sd;
  mpz_sqrt(sn.get_mpz_t(), r.num().get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), r.den().get_mpz_t());
  if (sn * sn != r.num() || sd * sd != r.den()) return false;
  out = Rational(sn, sd);
  return true;
}

inline Rational Rational::parse(std::string_view text) {
  auto fail = [&] { return Error(ErrorKind::ParseError, "bad rational literal '" + std::string(text) + "'"); };
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (text.empty()) throw fail();

  auto parse_int = [&](std::string_view s) {
    std::string_view digits = s;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
    if (digits.empty()) throw fail();
    for (char c : digits)
      if (c < '0' || c > '9') throw fail();
    std::string buf(s.front() == '+' ? s.substr(1) : s);
    return Integer(buf, 10);
  };

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer den = parse_int(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorKind::DivisionByZero, "zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    std::string_view whole_digits = whole;
    if (!whole_digits.empty() && (whole_digits.front() == '-' || whole_digits.front() == '+'))
      whole_digits.remove_prefix(1);
    if (whole_digits.empty() && frac.empty()) throw fail();
    for (char c : frac)
      if (c < '0' || c > '9') throw fail();
    Integer w = whole_digits.empty() ? Integer(0) : parse_int(whole_digits);
    Integer f = frac.empty() ? Integer(0) : Integer(std::string(frac), 10);
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Rational value(w * scale + f, scale);
    return negative ? -value : value;
  }
  return Rational(parse_int(text));
}

}  // namespace rram
