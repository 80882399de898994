#include "veerfix/projections.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <tuple>

namespace veerfix {

std::string to_string(EstimateStatus s) {
  switch (s) {
    case EstimateStatus::Exact: return "exact";
    case EstimateStatus::Stabilized: return "stabilized";
    case EstimateStatus::BoundedBelow: return "bounded_below";
    case EstimateStatus::BoundedAbove: return "bounded_above";
  }
  return "?";
}

namespace {

struct CylFrame {
  Vec2 O, u, w;
  FieldElement c;  // cross(u, w) > 0
  FieldElement a(const Vec2& X) const { return cross(X - O, w) / c; }
  FieldElement b(const Vec2& X) const { return cross(u, X - O) / c; }
};

CylFrame frame_of(const FlatSurface& s, const Cylinder& cyl) {
  CylFrame F{s.corner_pos(cyl.base_corner), cyl.hol, cyl.transversal(), {}};
  F.c = cross(F.u, F.w);
  return F;
}

FieldElement slope_of(const CylFrame& F, const Vec2& v) {
  FieldElement alpha = cross(v, F.w) / F.c, beta = cross(F.u, v) / F.c;
  return alpha / beta;
}

// Parameter interval of p0 + tau (p1 - p0) inside a convex ccw polygon.
std::optional<std::pair<FieldElement, FieldElement>> clip_segment(const Polygon& P, const Vec2& p0, const Vec2& p1) {
  const FieldPtr& k = p0.x.field();
  FieldElement lo = k->zero(), hi = k->one();
  Vec2 d = p1 - p0;
  for (std::size_t i = 0; i < P.size(); ++i) {
    Vec2 e = P[(i + 1) % P.size()] - P[i];
    // cross(e, p0 + tau d - P[i]) >= 0
    FieldElement c0 = cross(e, p0 - P[i]), c1 = cross(e, d);
    int s1 = c1.sign();
    if (s1 == 0) {
      if (c0.sign() < 0) return std::nullopt;
      continue;
    }
    FieldElement t = -c0 / c1;
    if (s1 > 0)
      lo = max(lo, t);
    else
      hi = min(hi, t);
    if (compare(lo, hi) > 0) return std::nullopt;
  }
  return std::make_pair(lo, hi);
}

}  // namespace

namespace {

// The cylinder with its developed pieces, shared across many arcs.
struct CylCtx {
  const FlatSurface& s;
  CylFrame F;
  DevelopResult dev;
  CylCtx(const FlatSurface& s_, const Cylinder& cyl) : s(s_), F(frame_of(s_, cyl)) {
    Polygon P{F.O, F.O + F.u, F.O + F.u + F.w, F.O + F.w};
    dev = s.develop_region(P, cyl.base_corner / 3, Xform::identity(s.field()));
  }
};

// Straight segment leaving `corner` with holonomy `hol` in its chart.
AnnularArc arc_of_ray(const CylCtx& C, int corner, const Vec2& hol) {
  const FlatSurface& s = C.s;
  const CylFrame& F = C.F;
  if (cross(F.u, hol).is_zero()) fail(ErrorKind::NoEssentialCrossing, "arc parallel to the cylinder");
  const FieldPtr& k = s.field();
  // trace only as far as needed, doubling the length
  FieldElement tau = k->one() / k->from_rational(Rational(1) + floor_of(hol.x.abs() + hol.y.abs()));
  for (;;) {
    Trace tr = s.trace_from(corner / 3, s.corner_pos(corner), hol, tau, true);
    std::optional<FieldElement> best_t, best_a;
    for (const auto& g : chart_segments(tr)) {
      if (best_t && compare(g.t0, *best_t) > 0) break;
      for (const auto& R : C.dev.pieces) {
        if (R.tri != g.tri) continue;
        Vec2 X0 = R.T(g.p0), X1 = R.T(g.p1);
        auto iv = clip_segment(R.region, X0, X1);
        if (!iv || compare(iv->first, iv->second) >= 0) continue;
        for (const FieldElement& u : {iv->first, iv->second}) {
          Vec2 X = X0 + u * (X1 - X0);
          if (!F.b(X).is_zero()) continue;
          FieldElement t = g.t0 + u * (g.t1 - g.t0);
          if (!best_t || compare(t, *best_t) < 0) {
            best_t = t;
            best_a = F.a(X);
          }
        }
      }
    }
    if (best_t) {
      AnnularArc arc;
      arc.hol = hol;
      arc.slope = slope_of(F, hol);
      arc.entry = *best_a == k->one() ? k->zero() : *best_a;
      arc.winding = floor_of(arc.entry + arc.slope).get_num().get_si();
      return arc;
    }
    if (tr.end_corner >= 0 || compare(tau, k->one()) >= 0)
      fail(ErrorKind::NoEssentialCrossing, "arc " + hol.to_string() + " does not cross the cylinder");
    tau = min(k->one(), tau + tau);
  }
}

bool closed_contains(const Polygon& P, const Vec2& x) {
  for (std::size_t i = 0; i < P.size(); ++i)
    if (cross(P[(i + 1) % P.size()] - P[i], x - P[i]).sign() < 0) return false;
  return true;
}

// Image of the ray (corner, hol) under g, found from a short probe near the
// start vertex so the image is never traced in full.
std::pair<int, Vec2> image_ray(const PiecewiseAffineMap& g, int corner, const Vec2& hol) {
  const FlatSurface& s = *g.surface();
  const FieldPtr& k = s.field();
  const Vec2& v = s.corner_pos(corner);
  FieldElement tau = k->one() / k->from_rational(Rational(1) + floor_of(hol.x.abs() + hol.y.abs()));
  Trace first = s.trace_from(corner / 3, v, hol, tau, true);
  FieldElement eps = first.steps.front().t1 / k->from_rational(Rational(2));
  const int poly = s.tri(corner / 3).poly;
  for (int tries = 0; tries < 64; ++tries, eps = eps / k->from_rational(Rational(2))) {
    Vec2 p = v + eps * hol;
    auto pi = g.piece_at({poly, p});
    if (!pi || !closed_contains(g.pieces()[*pi].region, v)) continue;
    const MapPiece& pc = g.pieces()[*pi];
    Vec2 H = pc.D * hol;
    Trace back = s.trace_from_point({pc.dst, pc.D * p + pc.t}, -(eps * H), k->one(), true);
    check_internal(back.end_corner >= 0 && back.t_end == k->one(), "image of a ray does not start at a cone point");
    Vec2 h = back.steps.back().T.inverse().linear(H);
    auto [c, X] = s.corner_containing(back.end_corner, h);
    return {c, X.linear(h)};
  }
  fail(ErrorKind::Internal, "no map piece contains the start of the ray");
}

}  // namespace

AnnularArc annular_arc(const FlatSurface& s, const Cylinder& cyl, const SaddleConnection& sc) {
  return arc_of_ray(CylCtx(s, cyl), sc.start_corner, sc.hol);
}

AnnularArc twisted_arc(const Cylinder& cyl, const AnnularArc& x, const Mat2& D) {
  CylFrame F{{}, cyl.hol, cyl.transversal(), cross(cyl.hol, cyl.transversal())};
  AnnularArc y = x;
  y.hol = D * x.hol;
  y.slope = slope_of(F, y.hol);
  y.winding = floor_of(y.entry + y.slope).get_num().get_si();
  return y;
}

namespace {

// Integers strictly between the exit offsets: crossings of lifts away from
// their endpoints.
long interior_crossings(const AnnularArc& x, const AnnularArc& y) {
  FieldElement p = x.entry - y.entry, q = p + (x.slope - y.slope);
  if (compare(p, q) > 0) std::swap(p, q);
  Rational n = ceil_of(q) - floor_of(p) - 1;
  return std::max(0L, n.get_num().get_si());
}

}  // namespace

int annular_distance(const AnnularArc& x, const AnnularArc& y) {
  FieldElement p = x.entry - y.entry;
  FieldElement d = x.slope - y.slope;
  Rational n;
  if (d.sign() >= 0)
    n = floor_of(p + d) - floor_of(p);  // integers in (p, p + d]
  else
    n = ceil_of(p) - ceil_of(p + d);  // integers in [p + d, p)
  return 1 + static_cast<int>(n.get_num().get_si());
}

int annular_distance(const FlatSurface& s, const Cylinder& cyl, const SaddleConnection& x, const SaddleConnection& y) {
  if (same_segment(s, x, y)) return 0;
  return annular_distance(annular_arc(s, cyl, x), annular_arc(s, cyl, y));
}

// ---------------------------------------------------------------------------
// stabilized projections

LaminationProjection lamination_projection(const AffineAutomorphism& f, const Cylinder& cyl, int sign, int k_max) {
  const FlatSurface& s = *f.surface();
  PiecewiseAffineMap g = sign > 0 ? f.map().inverse() : f.map();
  Section T = f_section(f, complete_to_section(f.surface(), {}));
  CylCtx C(s, cyl);
  // iterates of the first section edge, in key order
  int corner = T.edges().front().fwd.start_corner;
  Vec2 hol = T.edges().front().fwd.hol;
  std::optional<AnnularArc> cur;
  std::vector<AnnularArc> window;
  int agree = 0;
  for (int k = 0; k <= k_max; ++k) {
    std::optional<AnnularArc> next;
    try {
      next = arc_of_ray(C, corner, hol);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::NoEssentialCrossing) throw;
    }
    agree = next && cur && interior_crossings(*next, *cur) == 0 ? agree + 1 : 0;
    if (agree == 0) window.clear();
    if (next) window.push_back(*next);
    cur = next;
    // four consecutive iterates with pairwise disjoint lifts
    if (agree == 3) return {*cur, corner, hol, k, window};
    if (k < k_max) std::tie(corner, hol) = image_ray(g, corner, hol);
  }
  fail(ErrorKind::NonStabilizing, "projection did not stabilize within " + std::to_string(k_max) + " iterations");
}

ProjectionEstimate lamination_distance(const AffineAutomorphism& f, const Cylinder& cyl, int k_max) {
  auto plus = lamination_projection(f, cyl, +1, k_max);
  auto minus = lamination_projection(f, cyl, -1, k_max);
  // diameter of the union, over the stabilized windows
  int d = 0;
  for (const auto& x : plus.window)
    for (const auto& y : minus.window) d = std::max(d, annular_distance(x, y));
  return {d, EstimateStatus::Stabilized};
}

// ---------------------------------------------------------------------------
// witnesses

std::vector<Cylinder> cylinders_up_to(const FlatSurface& s, const FieldElement& L) {
  std::vector<Vec2> dirs;
  for (const auto& c : enumerate_saddles(s, L, L)) {
    // one direction per line through the origin, taken in the upper half plane
    Vec2 h = c.hol;
    if (h.y.sign() < 0 || (h.y.is_zero() && h.x.sign() < 0)) h = -h;
    bool dup = false;
    for (const auto& d : dirs)
      if (cross(d, h).is_zero()) {
        dup = true;
        break;
      }
    if (!dup) dirs.push_back(h);
  }
  std::vector<Cylinder> out;
  for (const auto& d : dirs) {
    // c * d inside the box
    FieldElement bound = L / d.y.abs();
    if (!d.x.is_zero()) bound = d.y.is_zero() ? L / d.x.abs() : min(bound, L / d.x.abs());
    for (auto& cyl : cylinders_in_direction(s, d, bound)) out.push_back(std::move(cyl));
  }
  std::sort(out.begin(), out.end(), [](const Cylinder& a, const Cylinder& b) {
    int c = compare(dot(a.hol, a.hol), dot(b.hol, b.hol));
    if (c != 0) return c < 0;
    return key_less(a.hol, b.hol) || (a.hol == b.hol && a.base_corner < b.base_corner);
  });
  return out;
}

std::optional<Cylinder> irreducibility_witness_search(const AffineAutomorphism& f, const FieldElement& L) {
  for (auto& c : cylinders_up_to(*f.surface(), L))
    if (core_self_intersection(f, c) == 0) return c;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// growth rates

namespace {

struct DPoint {
  double x, y;
};
struct DSeg {
  int poly;
  DPoint a, b;
};
struct DPiece {
  int src, dst;
  std::vector<DPoint> region;
  double D[4];
  double t[2];
};

double side(const DPoint& a, const DPoint& b, const DPoint& p) {
  return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
}

}  // namespace

StretchEstimate stretch_estimate(const PiecewiseAffineMap& h, int iters) {
  const FlatSurface& s = *h.surface();
  std::vector<DPiece> pieces;
  std::vector<std::vector<int>> by_src(s.num_polygons());
  for (const auto& pc : h.pieces()) {
    DPiece d{pc.src, pc.dst, {}, {pc.D.a.to_double(), pc.D.b.to_double(), pc.D.c.to_double(), pc.D.d.to_double()},
             {pc.t.x.to_double(), pc.t.y.to_double()}};
    for (const auto& v : pc.region) d.region.push_back({v.x.to_double(), v.y.to_double()});
    by_src[pc.src].push_back(static_cast<int>(pieces.size()));
    pieces.push_back(std::move(d));
  }
  std::vector<DSeg> curve;
  for (std::size_t t = 0; t < s.triangles().size(); ++t) {
    const Triangle& T = s.tri(static_cast<int>(t));
    for (int k = 0; k < 3; ++k) {
      // each internal edge once
      if (static_cast<int>(t) > T.nbr[k] || (static_cast<int>(t) == T.nbr[k] && k > T.nbr_edge[k])) continue;
      curve.push_back({T.poly, {T.v[k].x.to_double(), T.v[k].y.to_double()},
                       {T.v[(k + 1) % 3].x.to_double(), T.v[(k + 1) % 3].y.to_double()}});
    }
  }
  auto length = [](const std::vector<DSeg>& c) {
    double L = 0;
    for (const auto& g : c) L += std::hypot(g.b.x - g.a.x, g.b.y - g.a.y);
    return L;
  };
  std::vector<double> lengths{length(curve)};
  const std::size_t cap = 400000;
  StretchEstimate est;
  for (int it = 0; it < iters && curve.size() < cap; ++it) {
    std::vector<DSeg> next;
    for (const auto& g : curve) {
      // breakpoints where the segment crosses piece boundaries
      std::vector<double> ts{0.0, 1.0};
      for (int pi : by_src[g.poly]) {
        const auto& R = pieces[pi].region;
        for (std::size_t i = 0; i < R.size(); ++i) {
          const DPoint &p = R[i], &q = R[(i + 1) % R.size()];
          double s0 = side(p, q, g.a), s1 = side(p, q, g.b);
          if ((s0 < 0 && s1 > 0) || (s0 > 0 && s1 < 0)) {
            double t = s0 / (s0 - s1);
            if (t > 1e-12 && t < 1 - 1e-12) ts.push_back(t);
          }
        }
      }
      std::sort(ts.begin(), ts.end());
      for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        double t0 = ts[i], t1 = ts[i + 1];
        if (t1 - t0 < 1e-14) continue;
        DPoint m{g.a.x + 0.5 * (t0 + t1) * (g.b.x - g.a.x), g.a.y + 0.5 * (t0 + t1) * (g.b.y - g.a.y)};
        int best = -1;
        double best_depth = -1e300;
        for (int pi : by_src[g.poly]) {
          const auto& R = pieces[pi].region;
          double depth = 1e300;
          for (std::size_t j = 0; j < R.size(); ++j) depth = std::min(depth, side(R[j], R[(j + 1) % R.size()], m));
          if (depth > best_depth) {
            best_depth = depth;
            best = pi;
          }
        }
        const DPiece& P = pieces[best];
        auto apply = [&](double t) {
          DPoint x{g.a.x + t * (g.b.x - g.a.x), g.a.y + t * (g.b.y - g.a.y)};
          return DPoint{P.D[0] * x.x + P.D[1] * x.y + P.t[0], P.D[2] * x.x + P.D[3] * x.y + P.t[1]};
        };
        next.push_back({P.dst, apply(t0), apply(t1)});
      }
    }
    curve = std::move(next);
    lengths.push_back(length(curve));
    if (!(lengths.back() > 1e-12)) fail(ErrorKind::DegenerateCurve, "curve lengths collapse");
    est.iterations = it + 1;
  }
  const std::size_t n = lengths.size();
  if (n < 2) fail(ErrorKind::DegenerateCurve, "no iterations performed");
  est.value = lengths[n - 1] / lengths[n - 2];
  double prev = n >= 3 ? lengths[n - 2] / lengths[n - 3] : 1.0;
  est.error = std::abs(est.value - prev) + 1e-9 * est.value;
  return est;
}

// ---------------------------------------------------------------------------
// tables

namespace {

// Data shared by the twist members over one base map and annulus.
struct TwistBase {
  AffineAutomorphism f;
  Vec2 annulus;
  std::string witness;
  std::optional<AnnularArc> x;  // first f-section edge crossing the annulus
  Mat2 D1;                      // derivative of the single twist on the annulus

  bool matches(const FamilyMember& m) const {
    return f.surface() == m.base->surface() && f.map().pieces().size() == m.base->map().pieces().size() &&
           f.lambda() == m.base->lambda() && annulus == m.annulus->hol;
  }
};

}  // namespace

std::vector<TableRow> coarse_table(const std::vector<FamilyMember>& family, int stretch_iters) {
  std::vector<TableRow> rows;
  const Rational witness_bound(4);
  const std::string none = "none_found(" + witness_bound.get_str() + ")";
  std::map<const FlatSurface*, Section> sections;
  auto section_of = [&](const SurfacePtr& sp) -> const Section& {
    auto it = sections.find(sp.get());
    if (it == sections.end()) it = sections.emplace(sp.get(), complete_to_section(sp, {})).first;
    return it->second;
  };
  std::optional<TwistBase> tb;
  for (const auto& m : family) {
    TableRow r;
    r.id = m.id;
    try {
      const FlatSurface& s = *m.map.surface();
      if (m.affine) {
        const AffineAutomorphism& f = *m.affine;
        FixReport fr = count_fixed_points(f);
        r.total = fr.total;
        r.regular = fr.regular;
        r.log_stretch = std::log(f.lambda().to_double());
        r.stretch_exact = true;
        if (m.annulus) {
          auto d = lamination_distance(f, *m.annulus);
          r.annular_term = d.value;
          r.annular_status = to_string(d.status);
        } else {
          // cylinders certified by folded spanning rectangles
          Section T = annular_avoiding_f_section(f, section_of(f.surface()));
          for (const auto& e : T.edges()) {
            auto R = is_veering_edge(s, e.fwd);
            if (!R || !R->witness) continue;
            auto d = lamination_distance(f, *R->witness);
            if (d.value > r.annular_term) {
              r.annular_term = d.value;
              r.annular_status = to_string(d.status);
            }
          }
        }
        auto w = irreducibility_witness_search(f, s.field()->from_rational(witness_bound));
        r.witness = w ? "found" : none;
      } else {
        FixReport fr = oracle_count_fixed_points(m.map, section_of(m.map.surface()));
        r.total = fr.total;
        r.regular = fr.regular;
        StretchEstimate se = stretch_estimate(m.map, stretch_iters);
        r.log_stretch = std::log(se.value);
        if (m.annulus && m.base) {
          if (!tb || !tb->matches(m)) {
            const AffineAutomorphism& b = *m.base;
            PiecewiseAffineMap tw = cylinder_twist(b.surface(), *m.annulus, 1);
            auto pi = tw.piece_at(core_point(s, *m.annulus));
            check_internal(pi.has_value(), "cylinder core outside the twist map");
            // t^n preserves alpha, so a witness for the base map is one for h as well
            auto w = irreducibility_witness_search(b, s.field()->from_rational(witness_bound));
            tb.emplace(TwistBase{b, m.annulus->hol, w ? "found" : none, std::nullopt, tw.pieces()[*pi].D});
            Section Tb = f_section(b, section_of(b.surface()));
            for (const auto& e : Tb.edges()) {
              try {
                tb->x = annular_arc(s, *m.annulus, e.fwd);
                break;
              } catch (const Error& err) {
                if (err.kind() != ErrorKind::NoEssentialCrossing) throw;
              }
            }
          }
          if (tb->x) {
            // d_alpha(x, t^n x)
            Mat2 Dn = Mat2::diag(s.field()->one(), s.field()->one());
            Mat2 step = m.twist >= 0 ? tb->D1 : tb->D1.inverse();
            for (int i = 0; i < std::abs(m.twist); ++i) Dn = Dn * step;
            r.annular_term = m.twist == 0 ? 0 : annular_distance(*tb->x, twisted_arc(*m.annulus, *tb->x, Dn));
            r.annular_status = to_string(EstimateStatus::Exact);
          }
          r.witness = tb->witness;
        } else {
          r.witness = "skipped";
        }
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Internal) throw;
      r.failed = true;
      r.error = e.what();
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string table_csv(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  os << "id,status,total_fixed,regular_fixed,log_stretch,stretch_kind,annular_term,annular_status,witness\n";
  for (const auto& r : rows) {
    if (r.failed) {
      os << r.id << ",failed,,,,,,,\"" << r.error << "\"\n";
      continue;
    }
    os << r.id << ",ok," << r.total << "," << r.regular << "," << std::setprecision(10) << r.log_stretch << ","
       << (r.stretch_exact ? "exact" : "estimate") << "," << (r.annular_term < 0 ? "" : std::to_string(r.annular_term)) << "," << r.annular_status << ","
       << r.witness << "\n";
  }
  return os.str();
}

std::string table_text(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(16) << "id" << std::setw(8) << "total" << std::setw(9) << "regular" << std::setw(14)
     << "log stretch" << std::setw(10) << "kind" << std::setw(9) << "annular" << std::setw(12) << "status"
     << "witness\n";
  for (const auto& r : rows) {
    if (r.failed) {
      os << std::setw(16) << r.id << "failed: " << r.error << "\n";
      continue;
    }
    std::ostringstream ls;
    ls << std::fixed << std::setprecision(6) << r.log_stretch;
    os << std::setw(16) << r.id << std::setw(8) << r.total << std::setw(9) << r.regular << std::setw(14) << ls.str()
       << std::setw(10) << (r.stretch_exact ? "exact" : "estimate") << std::setw(9)
       << (r.annular_term < 0 ? "-" : std::to_string(r.annular_term)) << std::setw(12)
       << (r.annular_status.empty() ? "-" : r.annular_status) << r.witness << "\n";
  }
  return os.str();
}

}  // namespace veerfix
