#include "veerfix/geometry.hpp"

#include <algorithm>

namespace veerfix {

bool key_less(const Vec2& a, const Vec2& b) {
  if (key_less(a.x, b.x)) return true;
  if (key_less(b.x, a.x)) return false;
  return key_less(a.y, b.y);
}

int lex_compare(const Vec2& a, const Vec2& b) {
  int c = compare(a.x, b.x);
  return c != 0 ? c : compare(a.y, b.y);
}

bool key_less(const Xform& a, const Xform& b) {
  if (a.s != b.s) return a.s < b.s;
  return key_less(a.t, b.t);
}

int orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a).sign(); }

Mat2 Mat2::inverse() const {
  FieldElement dt = det();
  if (dt.is_zero()) fail(ErrorKind::DivisionByZero, "singular matrix");
  FieldElement r = dt.inverse();
  return {d * r, -(b * r), -(c * r), a * r};
}

std::string Mat2::to_string() const {
  return "[[" + a.to_string() + ", " + b.to_string() + "], [" + c.to_string() + ", " + d.to_string() + "]]";
}

FieldElement signed_area2(const Polygon& p) {
  FieldElement s = p.front().x.field()->zero();
  for (std::size_t i = 0; i < p.size(); ++i) s += cross(p[i], p[(i + 1) % p.size()]);
  return s;
}

bool is_strictly_convex(const Polygon& p) {
  if (p.size() < 3) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (orient(p[i], p[(i + 1) % p.size()], p[(i + 2) % p.size()]) <= 0) return false;
  // a strictly convex turn sequence could still wind twice
  return signed_area2(p).sign() > 0 && [&] {
    // total turning equals one revolution iff the directions cross the
    // positive x axis exactly once
    int changes = 0;
    auto half = [](const Vec2& d) { return (d.y.sign() > 0 || (d.y.sign() == 0 && d.x.sign() > 0)) ? 0 : 1; };
    for (std::size_t i = 0; i < p.size(); ++i) {
      Vec2 d0 = p[(i + 1) % p.size()] - p[i];
      Vec2 d1 = p[(i + 2) % p.size()] - p[(i + 1) % p.size()];
      if (half(d0) != half(d1)) ++changes;
    }
    return changes == 2;
  }();
}

Where locate_in_convex(const Polygon& p, const Vec2& x) {
  int zeros = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    int o = orient(p[i], p[(i + 1) % p.size()], x);
    if (o < 0) return Where::Outside;
    if (o == 0) ++zeros;
  }
  if (zeros == 0) return Where::Interior;
  return zeros == 1 ? Where::Edge : Where::Vertex;
}

namespace {

void push_unique(Polygon& out, Vec2 v) {
  if (!out.empty() && out.back() == v) return;
  out.push_back(std::move(v));
}

Polygon cleanup(Polygon p) {
  while (p.size() > 1 && p.front() == p.back()) p.pop_back();
  // drop collinear vertices
  bool changed = true;
  while (changed && p.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Vec2& a = p[(i + p.size() - 1) % p.size()];
      const Vec2& b = p[i];
      const Vec2& c = p[(i + 1) % p.size()];
      if (orient(a, b, c) == 0) {
        p.erase(p.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }
  if (p.size() < 3) return {};
  return p;
}

}  // namespace

Polygon clip_halfplane(const Polygon& p, const Vec2& a, const Vec2& b) {
  if (p.empty()) return {};
  Vec2 d = b - a;
  std::vector<FieldElement> c;
  c.reserve(p.size());
  bool all_in = true, all_out = true;
  for (const auto& v : p) {
    c.push_back(cross(d, v - a));
    int s = c.back().sign();
    if (s < 0) all_in = false;
    if (s > 0) all_out = false;
  }
  if (all_in) return p;
  if (all_out) return {};
  Polygon out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::size_t j = (i + 1) % p.size();
    int si = c[i].sign(), sj = c[j].sign();
    if (si >= 0) push_unique(out, p[i]);
    if ((si > 0 && sj < 0) || (si < 0 && sj > 0)) {
      FieldElement t = c[i] / (c[i] - c[j]);
      push_unique(out, p[i] + t * (p[j] - p[i]));
    }
  }
  return cleanup(std::move(out));
}

Polygon clip_convex(const Polygon& p, const Polygon& q) {
  Polygon r = p;
  for (std::size_t i = 0; i < q.size() && !r.empty(); ++i) r = clip_halfplane(r, q[i], q[(i + 1) % q.size()]);
  return r;
}

std::vector<Polygon> convex_difference(const Polygon& p, const Polygon& q) {
  std::vector<Polygon> out;
  Polygon rest = p;
  for (std::size_t i = 0; i < q.size() && !rest.empty(); ++i) {
    const Vec2& a = q[i];
    const Vec2& b = q[(i + 1) % q.size()];
    Polygon outside = clip_halfplane(rest, b, a);
    if (!outside.empty()) out.push_back(std::move(outside));
    rest = clip_halfplane(rest, a, b);
  }
  return out;
}

Polygon transform(const Polygon& p, const Xform& x) {
  Polygon out;
  out.reserve(p.size());
  for (const auto& v : p) out.push_back(x(v));
  // a half-turn preserves orientation, so the order stays counterclockwise
  return out;
}

Polygon transform(const Polygon& p, const Mat2& m, const Vec2& t) {
  Polygon out;
  out.reserve(p.size());
  for (const auto& v : p) out.push_back(m * v + t);
  if (m.det().sign() < 0) std::reverse(out.begin(), out.end());
  return out;
}

BBox bbox(const Polygon& p) {
  BBox b{1e300, 1e300, -1e300, -1e300};
  for (const auto& v : p) {
    double x = v.x.to_double(), y = v.y.to_double();
    b.x0 = std::min(b.x0, x);
    b.y0 = std::min(b.y0, y);
    b.x1 = std::max(b.x1, x);
    b.y1 = std::max(b.y1, y);
  }
  double slack = 1e-9 * (1 + std::max(std::abs(b.x1 - b.x0), std::abs(b.y1 - b.y0))) + 1e-12;
  b.x0 -= slack + 1e-9 * std::abs(b.x0);
  b.y0 -= slack + 1e-9 * std::abs(b.y0);
  b.x1 += slack + 1e-9 * std::abs(b.x1);
  b.y1 += slack + 1e-9 * std::abs(b.y1);
  return b;
}

std::optional<std::pair<FieldElement, FieldElement>> segment_params(const Vec2& p0, const Vec2& p1, const Vec2& q0,
                                                                     const Vec2& q1) {
  Vec2 r = p1 - p0, s = q1 - q0;
  FieldElement den = cross(r, s);
  if (den.is_zero()) return std::nullopt;
  Vec2 w = q0 - p0;
  FieldElement tn = cross(w, s), un = cross(w, r);
  int sd = den.sign();
  // 0 <= tn/den <= 1 and 0 <= un/den <= 1 without dividing first
  auto within = [&](const FieldElement& n) {
    int sn = n.sign() * sd;
    if (sn < 0) return false;
    return compare(n.abs(), den.abs()) <= 0;
  };
  if (!within(tn) || !within(un)) return std::nullopt;
  FieldElement inv = den.inverse();
  return std::make_pair(tn * inv, un * inv);
}

}  // namespace veerfix
