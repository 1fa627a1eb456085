#pragma once

#include "rram/geo/points.hpp"

namespace rram::geo {

enum class Quantile { Right, Up, Left, Down };

/// Diagonal sectors around the axes; boundary directions go to the first of right, up, left, down.
inline Quantile quantile_of(const Point& v) {
  Rational ax = v.x.abs(), ay = v.y.abs();
  if (v.x.sign() > 0 && ay <= ax) return Quantile::Right;
  if (v.y.sign() > 0 && ax <= ay) return Quantile::Up;
  if (v.x.sign() < 0 && ay <= ax) return Quantile::Left;
  return Quantile::Down;
}

inline Point axis_vector(Quantile q) {
  switch (q) {
    case Quantile::Right: return {Rational(1), Rational(0)};
    case Quantile::Up: return {Rational(0), Rational(1)};
    case Quantile::Left: return {Rational(-1), Rational(0)};
    case Quantile::Down: return {Rational(0), Rational(-1)};
  }
  return {};
}

inline Quantile opposite(Quantile q) {
  switch (q) {
    case Quantile::Right: return Quantile::Left;
    case Quantile::Up: return Quantile::Down;
    case Quantile::Left: return Quantile::Right;
    case Quantile::Down: return Quantile::Up;
  }
  return q;
}

inline bool is_axis_unit(const Point& v) {
  return (v.x.abs() == Rational(1) && v.y.is_zero()) || (v.y.abs() == Rational(1) && v.x.is_zero());
}

struct Rotation {
  Point point;    // exactly on the unit circle
  Point anchor;   // axis vector the construction went through
  Point rounded;  // the w-bit grid point the line passes through
};

/// Rotates the frame so the anchor becomes (1,0), rounds the target outward to the
/// 2^-w grid (first coordinate down, second away from the x-axis), and returns the second
/// intersection of the line through (1,0) and the rounded point with the unit circle.
/// The known root at the anchor is factored out, so the result is rational.
inline Rotation rotate_through_anchor(const Point& target, const Point& anchor, unsigned w) {
  if (!is_axis_unit(anchor)) throw Error(ErrorKind::DegenerateTarget, "anchor must be an axis unit vector");
  if (w < 1) throw Error(ErrorKind::InvalidConfig, "w must be >= 1");
  // (u, v) = S(target) with S(anchor) = (1, 0); S is a signed axis permutation
  auto to_frame = [&](const Point& p) -> Point {
    if (anchor.x == Rational(1)) return p;
    if (anchor.x == Rational(-1)) return {-p.x, -p.y};
    if (anchor.y == Rational(1)) return {p.y, -p.x};
    return {-p.y, p.x};
  };
  auto from_frame = [&](const Point& p) -> Point {
    if (anchor.x == Rational(1)) return p;
    if (anchor.x == Rational(-1)) return {-p.x, -p.y};
    if (anchor.y == Rational(1)) return {-p.y, p.x};
    return {p.y, -p.x};
  };
  Point t = to_frame(target);
  Rational scale(pow2(w));
  Rational a = Rational(floor(t.x * scale)) / scale;
  Rational b = t.y.sign() >= 0 ? Rational(ceil(t.y * scale)) / scale : Rational(floor(t.y * scale)) / scale;
  Rational da = Rational(1) - a;
  Rational norm = da * da + b * b;
  if (norm.is_zero()) throw Error(ErrorKind::DegenerateTarget, "target rounds onto the anchor");
  // P(s) = (1,0) + s (a - 1, b) meets the circle again at s = 2(1 - a) / ((1 - a)^2 + b^2)
  Rational s = Rational(2) * da / norm;
  Point p{Rational(1) - s * da, s * b};
  return {from_frame(p), anchor, from_frame({a, b})};
}

/// Rational point of the unit circle near the target, built through the axis vector of the opposite quantile.
inline Rotation rational_rotation(const Point& target, unsigned w) {
  if (target.x.is_zero() && target.y.is_zero()) throw Error(ErrorKind::DegenerateTarget, "zero direction");
  Rational n2 = dot(target, target);
  if ((n2 - Rational(1)).abs() > Rational(1, 4))
    throw Error(ErrorKind::DegenerateTarget, "target is not near the unit circle: |a^2+b^2-1| > 1/4");
  if (is_axis_unit(target)) return {target, target, target};
  return rotate_through_anchor(target, axis_vector(opposite(quantile_of(target))), w);
}

}  // namespace rram::geo
