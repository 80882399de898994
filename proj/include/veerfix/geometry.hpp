#pragma once

// Plane geometry over a real number field. Every predicate is an exact sign.

#include <array>
#include <optional>
#include <vector>

#include "veerfix/exactnum.hpp"

namespace veerfix {

struct Vec2 {
  FieldElement x;
  FieldElement y;

  friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(const FieldElement& s, const Vec2& a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator*(const Rational& s, const Vec2& a) { return {a.x * s, a.y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
  friend bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Vec2& a, const Vec2& b) { return !(a == b); }
  bool is_zero() const { return x.is_zero() && y.is_zero(); }

  std::string to_string() const { return "(" + x.to_string() + ", " + y.to_string() + ")"; }
};

/// Deterministic total order on coordinate vectors (not geometric).
bool key_less(const Vec2& a, const Vec2& b);
/// Compares x then y by real value.
int lex_compare(const Vec2& a, const Vec2& b);

inline FieldElement cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline FieldElement dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
/// Sign of cross(b - a, c - a): +1 for a counterclockwise turn.
int orient(const Vec2& a, const Vec2& b, const Vec2& c);

struct Mat2 {
  FieldElement a, b, c, d;  // [[a, b], [c, d]]

  Vec2 operator*(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  friend Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }
  friend bool operator==(const Mat2& m, const Mat2& n) { return m.a == n.a && m.b == n.b && m.c == n.c && m.d == n.d; }
  FieldElement det() const { return a * d - b * c; }
  FieldElement trace() const { return a + d; }
  Mat2 inverse() const;
  static Mat2 identity(const FieldPtr& k) { return {k->one(), k->zero(), k->zero(), k->one()}; }
  static Mat2 diag(const FieldElement& p, const FieldElement& q) { return {p, p.field()->zero(), p.field()->zero(), q}; }
  std::string to_string() const;
};

/// x -> s*x + t with s = +1 or -1: the transition maps of a half-translation surface.
struct Xform {
  int s = 1;
  Vec2 t;

  Vec2 operator()(const Vec2& p) const { return s > 0 ? p + t : t - p; }
  Vec2 linear(const Vec2& v) const { return s > 0 ? v : -v; }
  /// (this ∘ o)(p) = this(o(p))
  Xform operator*(const Xform& o) const { return {s * o.s, (*this)(o.t)}; }
  Xform inverse() const { return s > 0 ? Xform{1, -t} : Xform{-1, t}; }
  friend bool operator==(const Xform& a, const Xform& b) { return a.s == b.s && a.t == b.t; }
  static Xform identity(const FieldPtr& k) { return {1, {k->zero(), k->zero()}}; }
  static Xform translation(const Vec2& t) { return {1, t}; }
};

bool key_less(const Xform& a, const Xform& b);

using Polygon = std::vector<Vec2>;  // counterclockwise

FieldElement signed_area2(const Polygon& p);  // twice the signed area
bool is_strictly_convex(const Polygon& p);

/// Point location relative to a convex counterclockwise polygon.
enum class Where { Outside, Interior, Edge, Vertex };
Where locate_in_convex(const Polygon& p, const Vec2& x);
inline bool in_closed(const Polygon& p, const Vec2& x) { return locate_in_convex(p, x) != Where::Outside; }

/// Keeps the part of `p` with cross(b - a, x - a) >= 0.
Polygon clip_halfplane(const Polygon& p, const Vec2& a, const Vec2& b);
/// Intersection of two convex polygons; empty if the result has zero area.
Polygon clip_convex(const Polygon& p, const Polygon& q);
/// Closure of p minus q split into convex pieces of positive area.
std::vector<Polygon> convex_difference(const Polygon& p, const Polygon& q);

Polygon transform(const Polygon& p, const Xform& x);
Polygon transform(const Polygon& p, const Mat2& m, const Vec2& t);

/// Axis-aligned bounding box in doubles; only for pruning, never decisions.
struct BBox {
  double x0, y0, x1, y1;
  bool overlaps(const BBox& o) const { return !(o.x0 > x1 || x0 > o.x1 || o.y0 > y1 || y0 > o.y1); }
};
BBox bbox(const Polygon& p);

/// Intersection of closed segments p0p1 and q0q1 with nonparallel directions,
/// returned as parameters (t, u) on each; nullopt if they miss.
std::optional<std::pair<FieldElement, FieldElement>> segment_params(const Vec2& p0, const Vec2& p1, const Vec2& q0,
                                                                     const Vec2& q1);

}  // namespace veerfix
