#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rram/error.hpp"
#include "rram/exact/rational.hpp"

namespace rram::lab {

using Exponent = std::vector<unsigned>;

/// Polynomial in x1..xd with rational coefficients; zero coefficients are never stored.
class MultiPoly {
 public:
  explicit MultiPoly(std::size_t d = 1) : d_(d) {
    if (d < 1) throw Error(ErrorKind::InvalidConfig, "polynomial dimension must be >= 1");
  }

  static MultiPoly constant(std::size_t d, const Rational& c) {
    MultiPoly p(d);
    p.add_term(Exponent(d, 0), c);
    return p;
  }
  /// x_i, 0-based.
  static MultiPoly variable(std::size_t d, std::size_t i) {
    if (i >= d) throw Error(ErrorKind::OutOfRange, "variable index outside the dimension");
    Exponent e(d, 0);
    e[i] = 1;
    MultiPoly p(d);
    p.add_term(e, Rational(1));
    return p;
  }

  void add_term(const Exponent& e, const Rational& c) {
    if (e.size() != d_) throw Error(ErrorKind::ArityMismatch, "exponent vector of the wrong length");
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  std::size_t dimension() const { return d_; }
  const std::map<Exponent, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  unsigned degree() const {
    unsigned deg = 0;
    for (const auto& [e, c] : terms_) {
      unsigned s = 0;
      for (unsigned x : e) s += x;
      deg = std::max(deg, s);
    }
    return deg;
  }

  Rational max_coef() const {
    Rational m(0);
    for (const auto& [e, c] : terms_) m = std::max(m, c.abs());
    return m;
  }

  Rational eval(const std::vector<Rational>& x) const {
    if (x.size() != d_)
      throw Error(ErrorKind::ArityMismatch, "point has " + std::to_string(x.size()) + " coordinates, expected " +
                                                std::to_string(d_));
    Rational sum(0);
    for (const auto& [e, c] : terms_) {
      Rational t = c;
      for (std::size_t i = 0; i < d_; ++i)
        for (unsigned k = 0; k < e[i]; ++k) t = t * x[i];
      sum = sum + t;
    }
    return sum;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    a.same_dim(b);
    MultiPoly r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }
  friend MultiPoly operator-(const MultiPoly& a) {
    MultiPoly r(a.d_);
    for (const auto& [e, c] : a.terms_) r.add_term(e, -c);
    return r;
  }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return a + (-b); }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.same_dim(b);
    MultiPoly r(a.d_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e(a.d_);
        for (std::size_t i = 0; i < a.d_; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  MultiPoly scaled(const Rational& s) const {
    MultiPoly r(d_);
    for (const auto& [e, c] : terms_) r.add_term(e, c * s);
    return r;
  }
  MultiPoly pow(unsigned k) const {
    MultiPoly r = constant(d_, Rational(1));
    for (unsigned i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  bool operator==(const MultiPoly& o) const { return d_ == o.d_ && terms_ == o.terms_; }

  /// Literal form, e.g. "2*x1^2*x2 - 1/3*x2 + 4"; terms in decreasing degree.
  std::string str() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<Exponent, Rational>> ts(terms_.begin(), terms_.end());
    std::stable_sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
      unsigned sa = 0, sb = 0;
      for (unsigned x : a.first) sa += x;
      for (unsigned x : b.first) sb += x;
      if (sa != sb) return sa > sb;
      return a.first > b.first;
    });
    std::string out;
    for (std::size_t n = 0; n < ts.size(); ++n) {
      const auto& [e, c] = ts[n];
      bool neg = c.sign() < 0;
      if (n == 0) {
        if (neg) out += "-";
      } else {
        out += neg ? " - " : " + ";
      }
      Rational a = c.abs();
      std::string mono;
      for (std::size_t i = 0; i < d_; ++i) {
        if (!e[i]) continue;
        if (!mono.empty()) mono += "*";
        mono += "x" + std::to_string(i + 1);
        if (e[i] > 1) mono += "^" + std::to_string(e[i]);
      }
      if (mono.empty()) {
        out += a.str();
      } else if (a == Rational(1)) {
        out += mono;
      } else {
        out += a.str() + "*" + mono;
      }
    }
    return out;
  }

 private:
  void same_dim(const MultiPoly& o) const {
    if (o.d_ != d_) throw Error(ErrorKind::ArityMismatch, "polynomials of different dimension");
  }

  std::size_t d_;
  std::map<Exponent, Rational> terms_;
};

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string_view s, std::size_t d) : s_(s), d_(d) {}

  MultiPoly parse() {
    MultiPoly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::ParseError, "polynomial, offset " + std::to_string(pos_) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::string digits() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(s_.substr(start, pos_ - start));
  }

  MultiPoly expr() {
    skip();
    bool neg = eat('-');
    if (!neg) eat('+');
    MultiPoly acc = term();
    if (neg) acc = -acc;
    for (;;) {
      if (eat('+')) {
        acc = acc + term();
      } else if (eat('-')) {
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }
  MultiPoly term() {
    MultiPoly acc = factor();
    while (eat('*')) acc = acc * factor();
    return acc;
  }
  MultiPoly factor() {
    MultiPoly base = atom();
    if (eat('^')) base = base.pow(static_cast<unsigned>(std::stoul(digits())));
    return base;
  }
  MultiPoly atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      MultiPoly inner = expr();
      if (!eat(')')) fail("missing ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = digits();
      if (eat('/')) num += "/" + digits();
      return MultiPoly::constant(d_, Rational::parse(num));
    }
    if (c == 'x' || c == 'y' || c == 'z') {
      ++pos_;
      std::size_t idx = c == 'x' ? 0 : c == 'y' ? 1 : 2;
      if (c == 'x' && pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::size_t n = std::stoul(std::string(s_.substr(start, pos_ - start)));
        if (n < 1) fail("variables are numbered from x1");
        idx = n - 1;
      }
      if (idx >= d_) fail("variable outside dimension " + std::to_string(d_));
      return MultiPoly::variable(d_, idx);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t d_;
  std::size_t pos_ = 0;
};

inline std::size_t infer_dimension(std::string_view s) {
  std::size_t d = 1;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == 'y') d = std::max<std::size_t>(d, 2);
    if (s[i] == 'z') d = std::max<std::size_t>(d, 3);
    if (s[i] == 'x') {
      std::size_t j = i + 1, n = 0;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) n = n * 10 + (s[j++] - '0');
      if (j > i + 1) d = std::max(d, n);
    }
  }
  return d;
}

}  // namespace detail

/// Parses "2*x1^2*x2 - 1/3*x2 + 4" (also x, y, z for x1, x2, x3, and parentheses).
/// With d = 0 the dimension is the largest variable index present (at least 1).
inline MultiPoly parse_poly(std::string_view text, std::size_t d = 0) {
  if (d == 0) d = detail::infer_dimension(text);
  return detail::PolyParser(text, d).parse();
}

// univariate ------------------------------------------------------------------

/// c[i] is the coefficient of s^i; trailing zeros are trimmed.
struct UniPoly {
  std::vector<Rational> c;

  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coeffs) : c(std::move(coeffs)) { trim(); }

  void trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  const Rational& lead() const { return c.back(); }

  Rational eval(const Rational& x) const {
    Rational acc(0);
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
  }
  int sign_at(const Rational& x) const { return eval(x).sign(); }

  UniPoly derivative() const {
    std::vector<Rational> d;
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * Rational(static_cast<long>(i)));
    return UniPoly(d);
  }
};

/// Polynomial long division: a = q b + r with deg r < deg b.
inline std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
  if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by the zero polynomial");
  std::vector<Rational> r = a.c;
  std::vector<Rational> q(a.c.size() >= b.c.size() ? a.c.size() - b.c.size() + 1 : 0);
  for (int i = static_cast<int>(r.size()) - 1; i >= b.degree(); --i) {
    if (r[i].is_zero()) continue;
    Rational f = r[i] / b.lead();
    std::size_t shift = static_cast<std::size_t>(i - b.degree());
    q[shift] = f;
    for (std::size_t j = 0; j < b.c.size(); ++j) r[shift + j] = r[shift + j] - f * b.c[j];
  }
  return {UniPoly(q), UniPoly(r)};
}

inline UniPoly monic(const UniPoly& p) {
  if (p.is_zero()) return p;
  std::vector<Rational> c;
  for (const auto& x : p.c) c.push_back(x / p.lead());
  return UniPoly(c);
}

inline UniPoly gcd(UniPoly a, UniPoly b) {
  while (!b.is_zero()) {
    UniPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

/// p / gcd(p, p'): same roots, all simple.
inline UniPoly squarefree(const UniPoly& p) {
  if (p.degree() < 1) return p;
  return divmod(p, gcd(p, p.derivative())).first;
}

class SturmSequence {
 public:
  /// p must be squarefree and nonzero.
  explicit SturmSequence(const UniPoly& p) {
    seq_.push_back(p);
    if (p.degree() >= 1) seq_.push_back(p.derivative());
    while (seq_.back().degree() >= 1) {
      UniPoly r = divmod(seq_[seq_.size() - 2], seq_.back()).second;
      if (r.is_zero()) break;
      for (auto& x : r.c) x = -x;
      seq_.push_back(r);
    }
  }

  int variations(const Rational& x) const {
    int v = 0, last = 0;
    for (const auto& s : seq_) {
      int sg = s.sign_at(x);
      if (sg == 0) continue;
      if (last != 0 && sg != last) ++v;
      last = sg;
    }
    return v;
  }

  /// Distinct roots in the open interval (a, b); a and b must not be roots.
  int roots_between(const Rational& a, const Rational& b) const { return variations(a) - variations(b); }

 private:
  std::vector<UniPoly> seq_;
};

/// Restriction of p to the axis-parallel line through `at` in direction `axis`.
inline UniPoly restrict_to_line(const MultiPoly& p, const std::vector<Rational>& at, std::size_t axis) {
  std::vector<Rational> c;
  for (const auto& [e, coef] : p.terms()) {
    Rational t = coef;
    for (std::size_t i = 0; i < p.dimension(); ++i)
      if (i != axis)
        for (unsigned k = 0; k < e[i]; ++k) t = t * at[i];
    if (c.size() <= e[axis]) c.resize(e[axis] + 1, Rational(0));
    c[e[axis]] = c[e[axis]] + t;
  }
  return UniPoly(c);
}

}  // namespace rram::lab
