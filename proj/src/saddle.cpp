#include "veerfix/saddle.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace veerfix {

std::string SaddleConnection::to_string() const {
  std::string s = "(" + std::to_string(start) + ", " + hol.x.to_string() + ", " + hol.y.to_string() + ", [";
  for (std::size_t i = 0; i < chain.size(); ++i)
    s += (i ? " " : "") + std::to_string(chain[i].first) + ":" + std::to_string(chain[i].second);
  return s + "])";
}

bool same_oriented(const SaddleConnection& a, const SaddleConnection& b) {
  return a.start_corner == b.start_corner && a.hol == b.hol;
}

bool same_segment(const FlatSurface& s, const SaddleConnection& a, const SaddleConnection& b) {
  if (same_oriented(a, b)) return true;
  if (a.start != b.end || a.end != b.start) return false;
  return same_oriented(a, reversed(s, b));
}

bool key_less(const SaddleConnection& a, const SaddleConnection& b) {
  if (a.start != b.start) return a.start < b.start;
  int c = lex_compare(a.hol, b.hol);
  if (c != 0) return c < 0;
  return a.start_corner < b.start_corner;
}

namespace {

SaddleConnection from_trace(const FlatSurface& s, int c, const Vec2& h, const Trace& tr) {
  SaddleConnection sc;
  sc.start_corner = c;
  sc.end_corner = tr.end_corner;
  sc.start = s.corner_vertex(c);
  sc.end = s.corner_vertex(tr.end_corner);
  sc.hol = h;
  for (const auto& st : tr.steps)
    if (st.exit_edge >= 0) sc.chain.emplace_back(st.tri, st.exit_edge);
  return sc;
}

}  // namespace

SaddleConnection saddle_from(const FlatSurface& s, int corner, const Vec2& hol) {
  if (hol.is_zero()) fail(ErrorKind::DegenerateInput, "zero holonomy");
  auto [c, X] = s.corner_containing(corner, hol);
  Vec2 h = X.linear(hol);
  const FieldElement one = s.field()->one();
  Trace tr = s.trace_from(c / 3, s.corner_pos(c), h, one, true);
  if (tr.end_corner < 0) fail(ErrorKind::DegenerateInput, "segment " + hol.to_string() + " does not end at a cone point");
  if (tr.t_end != one)
    fail(ErrorKind::PassesThroughSingularity, "segment " + hol.to_string() + " meets a cone point in its interior");
  return from_trace(s, c, h, tr);
}

SaddleConnection reversed(const FlatSurface& s, const SaddleConnection& c) {
  // the end corner's chart is the chart of the trace's last triangle
  Trace tr = trace_of(s, c);
  Vec2 h = tr.steps.back().T.inverse().linear(c.hol);
  return saddle_from(s, c.end_corner, -h);
}

SaddleConnection edge_saddle(const FlatSurface& s, int t, int e) {
  const Triangle& tr = s.tri(t);
  return saddle_from(s, 3 * t + e, tr.v[(e + 1) % 3] - tr.v[e]);
}

Trace trace_of(const FlatSurface& s, const SaddleConnection& c) {
  return s.trace_from(c.start_corner / 3, s.corner_pos(c.start_corner), c.hol, s.field()->one(), true);
}

std::vector<ChartSegment> chart_segments(const Trace& tr) {
  std::vector<ChartSegment> out;
  out.reserve(tr.steps.size());
  for (const auto& st : tr.steps) {
    Xform inv = st.T.inverse();
    out.push_back({st.tri, inv(tr.point_at(st.t0)), inv(tr.point_at(st.t1)), st.t0, st.t1});
  }
  return out;
}

namespace {

/// Parameter interval of a + u (b - a), u in [0, 1], satisfying all
/// constraints alpha + beta u >= 0; empty if it has no point.
class UInterval {
 public:
  explicit UInterval(const FieldPtr& k) : lo_(k->zero()), hi_(k->one()) {}
  void add(const FieldElement& alpha, const FieldElement& beta) {
    if (empty_) return;
    int sb = beta.sign();
    if (sb == 0) {
      if (alpha.sign() < 0) empty_ = true;
      return;
    }
    FieldElement r = -alpha / beta;
    if (sb > 0)
      lo_ = max(lo_, r);
    else
      hi_ = min(hi_, r);
    if (compare(lo_, hi_) > 0) empty_ = true;
  }
  bool empty() const { return empty_; }

 private:
  FieldElement lo_, hi_;
  bool empty_ = false;
};

bool edge_reaches_box(const Vec2& a, const Vec2& b, const Vec2& lo, const Vec2& hi, const FieldElement& bx,
                      const FieldElement& by) {
  Vec2 d = b - a;
  UInterval u(a.x.field());
  u.add(cross(lo, a), cross(lo, d));
  u.add(cross(a, hi), cross(d, hi));
  u.add(bx - a.x, -d.x);
  u.add(bx + a.x, d.x);
  u.add(by - a.y, -d.y);
  u.add(by + a.y, d.y);
  return !u.empty();
}

bool in_box(const Vec2& v, const FieldElement& bx, const FieldElement& by) {
  return compare(v.x.abs(), bx) <= 0 && compare(v.y.abs(), by) <= 0;
}

struct Window {
  int tri;
  Xform T;  // chart -> plane with the start vertex at the origin
  int edge;
  Vec2 lo, hi;
  std::vector<std::pair<int, int>> chain;
};

}  // namespace

std::vector<SaddleConnection> enumerate_saddles(const FlatSurface& s, const FieldElement& bx, const FieldElement& by) {
  if (bx.sign() <= 0 || by.sign() <= 0) fail(ErrorKind::DegenerateInput, "bounds must be positive");
  std::vector<SaddleConnection> out;
  const int ncorners = 3 * static_cast<int>(s.triangles().size());
  for (int c = 0; c < ncorners; ++c) {
    const int t0 = c / 3, i = c % 3;
    const Triangle& tr0 = s.tri(t0);
    Xform T0 = Xform::translation(-tr0.v[i]);
    auto emit = [&](const Vec2& h, int end_corner, std::vector<std::pair<int, int>> chain) {
      SaddleConnection sc;
      sc.start_corner = c;
      sc.end_corner = end_corner;
      sc.start = s.corner_vertex(c);
      sc.end = s.corner_vertex(end_corner);
      sc.hol = h;
      sc.chain = std::move(chain);
      out.push_back(std::move(sc));
    };
    Vec2 out_dir = s.corner_out(c);
    if (in_box(out_dir, bx, by)) emit(out_dir, 3 * t0 + (i + 1) % 3, {});
    std::vector<Window> stack;
    stack.push_back({t0, T0, (i + 1) % 3, out_dir, s.corner_in(c), {}});
    while (!stack.empty()) {
      Window w = std::move(stack.back());
      stack.pop_back();
      const Triangle& tr = s.tri(w.tri);
      Vec2 a = w.T(tr.v[w.edge]), b = w.T(tr.v[(w.edge + 1) % 3]);
      if (!edge_reaches_box(a, b, w.lo, w.hi, bx, by)) continue;
      int nt = tr.nbr[w.edge], ne = tr.nbr_edge[w.edge];
      Xform nT = w.T * tr.to_nbr[w.edge].inverse();
      int f = (ne + 2) % 3;
      Vec2 far = nT(s.tri(nt).v[f]);
      auto chain = w.chain;
      chain.emplace_back(w.tri, w.edge);
      bool after_lo = cross(w.lo, far).sign() > 0, before_hi = cross(far, w.hi).sign() > 0;
      if (after_lo && before_hi) {
        if (in_box(far, bx, by)) emit(far, 3 * nt + f, chain);
        stack.push_back({nt, nT, (ne + 1) % 3, w.lo, far, chain});
        stack.push_back({nt, nT, (ne + 2) % 3, far, w.hi, std::move(chain)});
      } else if (!after_lo) {
        stack.push_back({nt, nT, (ne + 2) % 3, w.lo, w.hi, std::move(chain)});
      } else {
        stack.push_back({nt, nT, (ne + 1) % 3, w.lo, w.hi, std::move(chain)});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return key_less(x, y); });
  return out;
}

int intersection_number(const FlatSurface& s, const SaddleConnection& a, const SaddleConnection& b) {
  return crossing_count(chart_segments(trace_of(s, a)), chart_segments(trace_of(s, b)));
}

std::vector<Crossing> crossings(const std::vector<ChartSegment>& sa, const std::vector<ChartSegment>& sb) {
  std::vector<Crossing> out;
  if (sa.empty() || sb.empty()) return out;
  std::map<int, std::vector<const ChartSegment*>> by_tri;
  for (const auto& g : sb) by_tri[g.tri].push_back(&g);
  const FieldPtr& k = sa.front().p0.x.field();
  const FieldElement zero = k->zero(), one = k->one();
  auto pair_less = [](const std::pair<FieldElement, FieldElement>& x, const std::pair<FieldElement, FieldElement>& y) {
    if (key_less(x.first, y.first)) return true;
    if (key_less(y.first, x.first)) return false;
    return key_less(x.second, y.second);
  };
  std::set<std::pair<FieldElement, FieldElement>, decltype(pair_less)> hits(pair_less);
  for (const auto& g : sa) {
    auto it = by_tri.find(g.tri);
    if (it == by_tri.end()) continue;
    Vec2 dg = g.p1 - g.p0;
    for (const ChartSegment* h : it->second) {
      Vec2 dh = h->p1 - h->p0;
      if (cross(dg, dh).is_zero()) {
        if (orient(g.p0, g.p1, h->p0) != 0) continue;
        // collinear: overlap of positive length?
        FieldElement u0 = dot(h->p0 - g.p0, dg), u1 = dot(h->p1 - g.p0, dg), L = dot(dg, dg);
        FieldElement lo = max(min(u0, u1), zero), hi = min(max(u0, u1), L);
        if (compare(lo, hi) < 0) fail(ErrorKind::OverlappingSegments, "saddle connections share a segment");
        continue;
      }
      auto p = segment_params(g.p0, g.p1, h->p0, h->p1);
      if (!p) continue;
      FieldElement ta = g.t0 + p->first * (g.t1 - g.t0), tb = h->t0 + p->second * (h->t1 - h->t0);
      if (ta.is_zero() || ta == one || tb.is_zero() || tb == one) continue;
      // a crossing on a triangle edge shows up in both adjacent triangles
      if (!hits.insert({ta, tb}).second) continue;
      out.push_back({ta, tb, g.tri, g.p0 + p->first * dg});
    }
  }
  std::sort(out.begin(), out.end(), [](const Crossing& x, const Crossing& y) { return compare(x.ta, y.ta) < 0; });
  return out;
}

int crossing_count(const std::vector<ChartSegment>& sa, const std::vector<ChartSegment>& sb) {
  return static_cast<int>(crossings(sa, sb).size());
}

namespace {

/// The outgoing ray in direction h obtained by turning clockwise by pi from
/// the ray -h at the end of a connection (left-side continuation).
int left_continuation(const FlatSurface& s, int end_corner, const Vec2& h_end) {
  auto [bc, X] = s.corner_containing(end_corner, -h_end);
  Vec2 h = X.linear(h_end);
  int n = s.cone_points()[s.corner_vertex(bc)].angle_pi / 2;
  // rays with direction h sit at angles pi, 3pi, ... counterclockwise from -h;
  // the clockwise neighbor of -h is the last of them
  int cur = bc;
  Vec2 back = -h;
  int ray = -1;
  for (int k = 0; k < n; ++k) {
    auto [c1, X1] = s.corner_after(cur, back, -back);
    ray = c1;
    back = X1.linear(back);
    if (k + 1 < n) {
      auto [c2, X2] = s.corner_after(c1, -back, back);
      cur = c2;
      back = X2.linear(back);
    }
  }
  return ray;
}

bool clean_strip(const FlatSurface& s, int base_corner, const Vec2& H, const FieldElement& b) {
  Vec2 O = s.corner_pos(base_corner);
  Vec2 n{-H.y, H.x};
  Polygon R{O - Rational(1, 2) * H, O + Rational(3, 2) * H, O + Rational(3, 2) * H + b * n, O - Rational(1, 2) * H + b * n};
  return !s.develop_region(R, base_corner / 3, Xform::identity(s.field()), true).hit_vertex;
}

}  // namespace

std::vector<Cylinder> cylinders_in_direction(const FlatSurface& s, const Vec2& dir, const FieldElement& bound) {
  if (dir.is_zero()) fail(ErrorKind::DegenerateInput, "zero direction");
  if (s.has_halfturns()) fail(ErrorKind::Unsupported, "cylinder search needs a translation surface");
  // parallel connections, keyed by start corner
  std::map<int, SaddleConnection> par;
  const int ncorners = 3 * static_cast<int>(s.triangles().size());
  for (int c = 0; c < ncorners; ++c) {
    if (!s.wedge_contains(c, dir)) continue;
    Trace tr = s.trace_from(c / 3, s.corner_pos(c), dir, bound, true);
    if (tr.end_corner < 0) continue;
    par.emplace(c, from_trace(s, c, tr.t_end * dir, tr));
  }
  std::vector<Cylinder> out;
  std::set<int> used;
  for (const auto& [c, sc] : par) {
    if (used.count(c)) continue;
    std::vector<SaddleConnection> chain{sc};
    Vec2 total = sc.hol;
    bool closed = false;
    for (std::size_t guard = 0; guard <= par.size(); ++guard) {
      const auto& cur = chain.back();
      int nxt = left_continuation(s, cur.end_corner, cur.hol);
      if (nxt == c) {
        closed = true;
        break;
      }
      auto it = par.find(nxt);
      if (it == par.end()) break;
      chain.push_back(it->second);
      total = total + it->second.hol;
    }
    if (!closed) continue;
    // total = m * dir; bound applies to m
    FieldElement m = dir.x.is_zero() ? total.y / dir.y : total.x / dir.x;
    if (compare(m, bound) > 0) continue;
    for (const auto& x : chain) used.insert(x.start_corner);
    // candidate heights: developed vertices above the base, up to area / |H|^2
    FieldElement H2 = dot(total, total);
    FieldElement B = s.area() / H2;
    Vec2 O = s.corner_pos(c);
    Vec2 n{-total.y, total.x};
    Polygon R{O - Rational(1, 2) * total, O + Rational(3, 2) * total, O + Rational(3, 2) * total + B * n,
              O - Rational(1, 2) * total + B * n};
    DevelopResult dev = s.develop_region(R, c / 3, Xform::identity(s.field()));
    std::vector<FieldElement> cand;
    for (const auto& pc : dev.pieces)
      for (const auto& v : s.tri(pc.tri).v) {
        Vec2 x = pc.T(v);
        if (!in_closed(R, x)) continue;
        FieldElement b = cross(total, x - O) / H2;
        if (b.sign() > 0) cand.push_back(b);
      }
    std::sort(cand.begin(), cand.end(), [](const auto& x, const auto& y) { return compare(x, y) < 0; });
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    check_internal(!cand.empty() && clean_strip(s, c, total, cand.front()), "cylinder has no top");
    std::size_t lo = 0, hi = cand.size() - 1;  // clean(lo) holds
    while (lo < hi) {
      std::size_t mid = (lo + hi + 1) / 2;
      if (clean_strip(s, c, total, cand[mid]))
        lo = mid;
      else
        hi = mid - 1;
    }
    Cylinder cyl;
    cyl.hol = total;
    cyl.height = cand[lo];
    cyl.area = H2 * cand[lo];
    cyl.bottom = std::move(chain);
    cyl.base_corner = c;
    out.push_back(std::move(cyl));
  }
  return out;
}

namespace {

/// Maximal number of polygons sharing an interior point, by splitting the
/// chart into cells.
int max_depth(const Polygon& domain, const std::vector<Polygon>& polys, Vec2* where) {
  std::vector<std::pair<Polygon, int>> cells{{domain, 0}};
  for (const auto& p : polys) {
    BBox pb = bbox(p);
    std::vector<std::pair<Polygon, int>> next;
    for (auto& [cell, k] : cells) {
      if (!bbox(cell).overlaps(pb)) {
        next.emplace_back(std::move(cell), k);
        continue;
      }
      Polygon in = clip_convex(cell, p);
      if (in.empty()) {
        next.emplace_back(std::move(cell), k);
        continue;
      }
      for (auto& d : convex_difference(cell, p)) next.emplace_back(std::move(d), k);
      next.emplace_back(std::move(in), k + 1);
    }
    cells = std::move(next);
  }
  int best = 0;
  for (const auto& [cell, k] : cells)
    if (k > best) {
      best = k;
      if (where) {
        Vec2 c = Rational(0) * cell[0];
        for (const auto& v : cell) c = c + v;
        *where = Rational(1, static_cast<long>(cell.size())) * c;
      }
    }
  return best;
}

bool cylinder_contains(const FlatSurface& s, const Cylinder& cyl, int tri, const Vec2& z) {
  Vec2 O = s.corner_pos(cyl.base_corner);
  Vec2 w = cyl.transversal();
  Polygon P{O, O + cyl.hol, O + cyl.hol + w, O + w};
  DevelopResult dev = s.develop_region(P, cyl.base_corner / 3, Xform::identity(s.field()));
  for (const auto& pc : dev.pieces)
    if (pc.tri == tri && in_closed(transform(pc.region, pc.T.inverse()), z)) return true;
  return false;
}

}  // namespace

std::optional<SpanningRectangle> is_veering_edge(const FlatSurface& s, const SaddleConnection& c) {
  if (c.hol.x.is_zero() || c.hol.y.is_zero())
    fail(ErrorKind::HorizontalOrVertical, "saddle connection " + c.hol.to_string() + " is parallel to a foliation");
  Vec2 O = s.corner_pos(c.start_corner);
  const FieldElement zero = s.field()->zero();
  Polygon rect{O, O + Vec2{c.hol.x, zero}, O + c.hol, O + Vec2{zero, c.hol.y}};
  if (signed_area2(rect).sign() < 0) std::reverse(rect.begin(), rect.end());
  DevelopResult dev = s.develop_region(rect, c.start_corner / 3, Xform::identity(s.field()), true);
  if (dev.hit_vertex) return std::nullopt;
  SpanningRectangle R;
  R.edge = c;
  R.rect = rect;
  R.pieces = std::move(dev.pieces);
  std::map<int, std::vector<const DevPiece*>> by_tri;
  for (const auto& pc : R.pieces) by_tri[pc.tri].push_back(&pc);
  std::vector<Vec2> deck;
  int wit_tri = -1;
  Vec2 wit_point;
  for (const auto& [t, ps] : by_tri) {
    if (ps.size() < 2) continue;
    std::vector<Polygon> pulled;
    for (const auto* p : ps) pulled.push_back(transform(p->region, p->T.inverse()));
    const Triangle& tr = s.tri(t);
    Vec2 at;
    int k = max_depth({tr.v[0], tr.v[1], tr.v[2]}, pulled, &at);
    if (k > R.degree) {
      R.degree = k;
      wit_tri = t;
      wit_point = at;
    }
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t j = i + 1; j < ps.size(); ++j)
        if (!clip_convex(pulled[i], pulled[j]).empty()) deck.push_back(ps[j]->T.t - ps[i]->T.t);
  }
  if (R.degree >= 2) {
    for (std::size_t i = 1; i < deck.size(); ++i)
      if (!cross(deck[0], deck[i]).is_zero()) R.ambiguous_witness = true;
    // the deck translation of the overlap is a multiple of a cylinder core
    const Vec2& d = deck.front();
    for (const Vec2& dir : {d, -d}) {
      for (auto& cyl : cylinders_in_direction(s, dir, s.field()->one()))
        if (cylinder_contains(s, cyl, wit_tri, wit_point)) {
          R.witness = std::move(cyl);
          break;
        }
      if (R.witness) break;
    }
  }
  return R;
}

std::vector<ChartSegment> closed_geodesic(const FlatSurface& s, const SurfacePoint& p, const Vec2& hol) {
  Trace tr = s.trace_from_point(p, hol, s.field()->one(), false);
  const TraceStep& last = tr.steps.back();
  SurfacePoint end{s.tri(last.tri).poly, last.T.inverse()(tr.point_at(s.field()->one()))};
  if (!(s.canonical(end) == s.canonical(p))) fail(ErrorKind::DegenerateInput, "trajectory does not close up");
  return chart_segments(tr);
}

SurfacePoint core_point(const FlatSurface& s, const Cylinder& c) {
  Vec2 v = Rational(1, 2) * (c.hol + c.transversal());
  Trace tr = s.trace_from_corner(c.base_corner, v, s.field()->one(), false);
  const TraceStep& last = tr.steps.back();
  return {s.tri(last.tri).poly, last.T.inverse()(tr.point_at(s.field()->one()))};
}

int closed_crossing_count(const std::vector<ChartSegment>& sa, const std::vector<ChartSegment>& sb) {
  if (sa.empty() || sb.empty()) return 0;
  const FieldPtr& k = sa.front().p0.x.field();
  const FieldElement zero = k->zero(), one = k->one();
  std::map<int, std::vector<const ChartSegment*>> by_tri;
  for (const auto& g : sb) by_tri[g.tri].push_back(&g);
  auto pair_less = [](const std::pair<FieldElement, FieldElement>& x, const std::pair<FieldElement, FieldElement>& y) {
    if (key_less(x.first, y.first)) return true;
    if (key_less(y.first, x.first)) return false;
    return key_less(x.second, y.second);
  };
  std::set<std::pair<FieldElement, FieldElement>, decltype(pair_less)> hits(pair_less);
  for (const auto& g : sa) {
    auto it = by_tri.find(g.tri);
    if (it == by_tri.end()) continue;
    Vec2 dg = g.p1 - g.p0;
    for (const ChartSegment* h : it->second) {
      Vec2 dh = h->p1 - h->p0;
      if (cross(dg, dh).is_zero()) {
        if (orient(g.p0, g.p1, h->p0) != 0) continue;
        FieldElement u0 = dot(h->p0 - g.p0, dg), u1 = dot(h->p1 - g.p0, dg), L = dot(dg, dg);
        FieldElement lo = max(min(u0, u1), zero), hi = min(max(u0, u1), L);
        if (compare(lo, hi) <= 0) fail(ErrorKind::OverlappingSegments, "closed curves share a segment");
        continue;
      }
      auto p = segment_params(g.p0, g.p1, h->p0, h->p1);
      if (!p) continue;
      FieldElement ta = g.t0 + p->first * (g.t1 - g.t0), tb = h->t0 + p->second * (h->t1 - h->t0);
      if (ta == one) ta = zero;
      if (tb == one) tb = zero;
      hits.insert({ta, tb});
    }
  }
  return static_cast<int>(hits.size());
}

}  // namespace veerfix
