#include "veerfix/fixcount.hpp"

#include <algorithm>
#include <optional>

namespace veerfix {

std::string to_string(FixKind k) {
  switch (k) {
    case FixKind::Regular: return "regular";
    case FixKind::Cone: return "cone";
    case FixKind::Marked: return "marked";
  }
  return "?";
}

namespace {

bool is_fixed(const AffineAutomorphism& f, const SurfacePoint& p) {
  return f.map().apply_key(p) == f.surface()->canonical(p);
}

FixedPoint make_point(const FlatSurface& s, const SurfacePoint& p, FixKind kind, int index) {
  FixedPoint fp;
  fp.poly = p.poly;
  fp.p = p.p;
  fp.kind = kind;
  fp.index = index;
  fp.key = s.canonical(p);
  return fp;
}

FixedPoint singular_point(const AffineAutomorphism& f, int v) {
  const FlatSurface& s = *f.surface();
  int c = s.vertex_corners(v).front();
  SurfacePoint p{s.tri(c / 3).poly, s.corner_pos(c)};
  const ConePoint& cp = s.cone_points()[v];
  return make_point(s, p, cp.angle_pi > 2 ? FixKind::Cone : FixKind::Marked, fixed_point_index(f, p));
}

void finish(FixReport& r, std::vector<FixedPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const FixedPoint& a, const FixedPoint& b) { return a.key < b.key; });
  r.points = std::move(pts);
  r.total = static_cast<int>(r.points.size());
  r.regular = r.singular = r.lefschetz = 0;
  for (const auto& p : r.points) {
    (p.kind == FixKind::Regular ? r.regular : r.singular) += 1;
    r.lefschetz += p.index;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// rectangle solves

std::vector<FixedPoint> fixed_points_in_rectangle(const AffineAutomorphism& f, const VEdge& sigma) {
  const FlatSurface& s = *f.surface();
  const FieldElement& l = f.lambda();
  const FieldElement one = s.field()->one();
  VEdge fs = image_edge(f.map(), sigma);
  if (same_edge(fs, sigma)) return {};
  const Vec2& h = sigma.hol();
  std::map<PointKey, FixedPoint> found;
  for (const Crossing& x : crossings(sigma.segs, fs.segs)) {
    // lift: sigma is P + t h, the developed f(sigma) through x is Q + s Dh,
    // and the lift of f sending P to Q has the fixed point P + u
    Vec2 u{(x.ta - x.tb * l) * h.x / (one - l), (x.ta - x.tb / l) * h.y / (one - l.inverse())};
    check_internal(compare(u.x * h.x.inverse(), s.field()->zero()) > 0 && compare(u.x * h.x.inverse(), one) < 0 &&
                       compare(u.y * h.y.inverse(), s.field()->zero()) > 0 && compare(u.y * h.y.inverse(), one) < 0,
                   "rectangle fixed point outside the open rectangle");
    Vec2 step = u - x.ta * h;
    SurfacePoint w{s.tri(x.tri).poly, x.p};
    if (!step.is_zero()) {
      Trace tr = s.trace_from_point(w, step, one, false);
      const TraceStep& last = tr.steps.back();
      w = {s.tri(last.tri).poly, last.T.inverse()(tr.point_at(one))};
    }
    check_internal(is_fixed(f, w), "rectangle solve is not a fixed point");
    FixedPoint fp = make_point(s, w, FixKind::Regular, -1);
    found.emplace(fp.key, fp);
  }
  std::vector<FixedPoint> out;
  for (auto& [k, p] : found) out.push_back(std::move(p));
  return out;
}

FixReport count_fixed_points(const AffineAutomorphism& f) {
  Section T0 = complete_to_section(f.surface(), {});
  return count_fixed_points(f, annular_avoiding_f_section(f, T0));
}

FixReport count_fixed_points(const AffineAutomorphism& f, const Section& T) {
  const FlatSurface& s = *f.surface();
  FixReport r;
  r.method = "rectangles";
  std::map<PointKey, FixedPoint> all;
  std::vector<std::pair<VEdge, std::vector<PointKey>>> attributed;
  for (const auto& e : T.edges()) {
    std::vector<PointKey> keys;
    for (auto& p : fixed_points_in_rectangle(f, e)) {
      keys.push_back(p.key);
      all.emplace(p.key, std::move(p));
    }
    attributed.emplace_back(e, std::move(keys));
  }
  const auto& perm = f.vertex_permutation();
  for (int v = 0; v < s.num_vertices(); ++v)
    if (perm[v] == v) {
      FixedPoint p = singular_point(f, v);
      all.emplace(p.key, p);
    }
  std::vector<FixedPoint> pts;
  for (auto& [k, p] : all) pts.push_back(std::move(p));
  finish(r, std::move(pts));
  for (auto& [e, keys] : attributed) {
    std::vector<int> idx;
    for (const auto& k : keys) {
      auto it = std::lower_bound(r.points.begin(), r.points.end(), k,
                                 [](const FixedPoint& p, const PointKey& q) { return p.key < q; });
      idx.push_back(static_cast<int>(it - r.points.begin()));
    }
    r.per_edge.emplace_back(std::move(e), std::move(idx));
  }
  return r;
}

// ---------------------------------------------------------------------------
// oracle

namespace {

// Solves (I - D) x = r; nullopt when I - D is singular.
std::optional<Vec2> solve_fixed(const Mat2& D, const Vec2& r) {
  const FieldPtr& k = D.a.field();
  Mat2 A{k->one() - D.a, -D.b, -D.c, k->one() - D.d};
  if (A.det().is_zero()) return std::nullopt;
  return A.inverse() * r;
}

// Face-by-face overlap solve shared by both oracle entry points. Regular
// points get index sign det(I - D) when every piece through them agrees on
// D; otherwise the index is left at 0 and `known` is cleared.
std::map<PointKey, FixedPoint> face_solve(const PiecewiseAffineMap& m, const Section& T, bool& known) {
  const FlatSurface& s = *m.surface();
  const FieldPtr& K = s.field();
  struct Piece {
    int poly;
    Polygon chart;  // in the polygon chart
    BBox box;
    Vec2 a;  // chart -> face coordinates is x + a
  };
  std::vector<BBox> mboxes;
  for (const auto& pc : m.pieces()) mboxes.push_back(bbox(pc.region));
  std::map<PointKey, FixedPoint> all;
  for (const Face& F : T.faces()) {
    const SaddleConnection& e0 = T.dart(F.darts[0]);
    const SaddleConnection& e1 = T.dart(F.darts[1]);
    int t0 = e0.start_corner / 3;
    Vec2 P = s.corner_pos(e0.start_corner);
    Polygon tri{P, P + e0.hol, P + e0.hol + e1.hol};
    check_internal(signed_area2(tri).sign() > 0, "section face is not counterclockwise");
    DevelopResult dev = s.develop_region(tri, t0, Xform::identity(K));
    check_internal(!dev.hit_vertex, "section face contains a cone point");
    std::vector<Piece> pieces;
    for (const auto& dp : dev.pieces) {
      check_internal(dp.T.s > 0, "half-turn chart in a translation surface");
      Polygon c = transform(dp.region, dp.T.inverse());
      pieces.push_back({s.tri(dp.tri).poly, c, bbox(c), dp.T.t});
    }
    for (const auto& A : pieces)
      for (int mi : m.pieces_of(A.poly)) {
        if (!mboxes[mi].overlaps(A.box)) continue;
        const MapPiece& mp = m.pieces()[mi];
        for (const auto& B : pieces) {
          if (B.poly != mp.dst) continue;
          auto x = solve_fixed(mp.D, mp.t + B.a - A.a);
          if (!x) fail(ErrorKind::Unsupported, "map piece with eigenvalue 1: fixed set may not be isolated");
          if (!in_closed(A.chart, *x) || !in_closed(mp.region, *x)) continue;
          if (!in_closed(B.chart, mp.D * *x + mp.t)) continue;
          SurfacePoint p{A.poly, *x};
          if (s.canonical(p).vertex >= 0) continue;
          check_internal(m.apply_key(p) == s.canonical(p), "oracle solve is not a fixed point");
          FixedPoint fp = make_point(s, p, FixKind::Regular, 0);
          all.emplace(fp.key, fp);
        }
      }
  }
  for (auto& [k, fp] : all) {
    // derivatives of all pieces through the point, over all representatives
    std::optional<Mat2> D;
    bool unique = true;
    SurfacePoint p{fp.poly, fp.p};
    for (const auto& rep : s.representatives(p)) {
      int poly = s.tri(rep.tri).poly;
      for (int mi : m.pieces_of(poly))
        if (in_closed(m.pieces()[mi].region, rep.q)) {
          if (!D) D = m.pieces()[mi].D;
          else if (!(*D == m.pieces()[mi].D)) unique = false;
        }
    }
    check_internal(D.has_value(), "fixed point outside every piece");
    if (unique) {
      Mat2 A{K->one() - D->a, -D->b, -D->c, K->one() - D->d};
      fp.index = A.det().sign();
    } else {
      known = false;
    }
  }
  return all;
}

}  // namespace

FixReport oracle_count_fixed_points(const AffineAutomorphism& f, const Section& T) {
  const FlatSurface& s = *f.surface();
  bool known = true;
  auto all = face_solve(f.map(), T, known);
  const auto& perm = f.vertex_permutation();
  for (int v = 0; v < s.num_vertices(); ++v)
    if (perm[v] == v) {
      FixedPoint p = singular_point(f, v);
      all.emplace(p.key, p);
    }
  FixReport r;
  r.method = "oracle";
  std::vector<FixedPoint> pts;
  for (auto& [k, p] : all) pts.push_back(std::move(p));
  finish(r, std::move(pts));
  r.indices_known = known;
  return r;
}

FixReport oracle_count_fixed_points(const PiecewiseAffineMap& h, const Section& T) {
  const FlatSurface& s = *h.surface();
  bool known = true;
  auto all = face_solve(h, T, known);
  const auto perm = h.vertex_permutation();
  for (int v = 0; v < s.num_vertices(); ++v)
    if (perm[v] == v) {
      int c = s.vertex_corners(v).front();
      SurfacePoint p{s.tri(c / 3).poly, s.corner_pos(c)};
      FixedPoint fp = make_point(s, p, s.cone_points()[v].angle_pi > 2 ? FixKind::Cone : FixKind::Marked, 0);
      all.emplace(fp.key, fp);
      known = false;  // prong data needs a single derivative
    }
  FixReport r;
  r.method = "oracle";
  std::vector<FixedPoint> pts;
  for (auto& [k, p] : all) pts.push_back(std::move(p));
  finish(r, std::move(pts));
  r.indices_known = known;
  return r;
}

VEdge max_edge(const Section& T, const AffineAutomorphism& f, int* value) {
  int best = -1, bi = 0;
  for (int i = 0; i < T.size(); ++i) {
    const VEdge& e = T.edges()[i];
    VEdge fe = image_edge(f.map(), e);
    int v = same_edge(e, fe) ? 0 : intersection_number(e, fe);
    if (v > best) {
      best = v;
      bi = i;
    }
  }
  check_internal(best >= 0, "empty section");
  if (value) *value = best;
  return T.edges()[bi];
}

// ---------------------------------------------------------------------------
// indices and homology

int fixed_point_index(const AffineAutomorphism& f, const SurfacePoint& p) {
  const FlatSurface& s = *f.surface();
  if (!is_fixed(f, p)) fail(ErrorKind::NotFixed, "point is not fixed");
  PointKey k = s.canonical(p);
  if (k.vertex < 0) return -1;
  const FieldPtr& K = s.field();
  const Vec2 right{K->one(), K->zero()};
  int c0 = s.corner_containing(s.vertex_corners(k.vertex).front(), right).first;
  // a short piece of the rightward prong, away from every other cone point
  Trace probe = s.trace_from_corner(c0, right, K->one(), true);
  FieldElement eps = probe.steps.front().t1 * Rational(1, 2);
  SurfacePoint x{s.tri(c0 / 3).poly, s.corner_pos(c0) + eps * right};
  SurfacePoint fx = f.apply(x);
  FieldElement back_len = f.lambda() * eps;
  Trace back = s.trace_from_point(fx, -right, back_len, true);
  check_internal(back.end_corner >= 0 && back.t_end == back_len && s.corner_vertex(back.end_corner) == k.vertex,
                 "image prong does not return to the fixed point");
  int c1 = s.corner_containing(back.end_corner, right).first;
  if (c1 == c0) return 1 - s.cone_points()[k.vertex].angle_pi;
  return 1;
}

namespace {

// Reduced row echelon form of the face relations on the edge chain group.
struct Quotient {
  std::vector<std::vector<Rational>> rows;
  std::vector<int> pivot;
  std::vector<bool> is_pivot;

  void reduce(std::vector<Rational>& v) const {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      Rational c = v[pivot[r]];
      if (c == 0) continue;
      for (std::size_t j = 0; j < v.size(); ++j)
        if (rows[r][j] != 0) v[j] -= c * rows[r][j];
    }
  }
};

Quotient face_quotient(std::vector<std::vector<Rational>> rel, int n) {
  Quotient q;
  q.is_pivot.assign(n, false);
  int r = 0;
  for (int col = 0; col < n && r < static_cast<int>(rel.size()); ++col) {
    int sel = -1;
    for (int i = r; i < static_cast<int>(rel.size()); ++i)
      if (rel[i][col] != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(rel[r], rel[sel]);
    Rational inv = 1 / rel[r][col];
    for (auto& x : rel[r]) x *= inv;
    for (int i = 0; i < static_cast<int>(rel.size()); ++i) {
      if (i == r || rel[i][col] == 0) continue;
      Rational c = rel[i][col];
      for (int j = 0; j < n; ++j) rel[i][j] -= c * rel[r][j];
    }
    q.pivot.push_back(col);
    q.is_pivot[col] = true;
    ++r;
  }
  rel.resize(r);
  q.rows = std::move(rel);
  return q;
}

}  // namespace

int lefschetz_number(const AffineAutomorphism& f) {
  const FlatSurface& s = *f.surface();
  const int nt = static_cast<int>(s.triangles().size());
  // global edge ids with orientation relative to the first triangle side seen
  std::vector<std::array<int, 3>> eid(nt), esign(nt);
  std::vector<std::pair<int, int>> rep;
  for (int t = 0; t < nt; ++t) eid[t].fill(-1);
  for (int t = 0; t < nt; ++t)
    for (int k = 0; k < 3; ++k) {
      if (eid[t][k] >= 0) continue;
      const Triangle& T = s.tri(t);
      check_internal(T.to_nbr[k].s > 0, "half-turn gluing in a translation surface");
      int id = static_cast<int>(rep.size());
      rep.emplace_back(t, k);
      eid[t][k] = id;
      esign[t][k] = 1;
      eid[T.nbr[k]][T.nbr_edge[k]] = id;
      esign[T.nbr[k]][T.nbr_edge[k]] = -1;
    }
  const int ne = static_cast<int>(rep.size());
  std::vector<std::vector<Rational>> rel;
  for (int t = 0; t < nt; ++t) {
    std::vector<Rational> row(ne, Rational(0));
    for (int k = 0; k < 3; ++k) row[eid[t][k]] += esign[t][k];
    rel.push_back(std::move(row));
  }
  Quotient q = face_quotient(std::move(rel), ne);

  // chain of a saddle connection: slide every edge crossing to the vertex
  // where the crossed edge starts in the triangle being left
  auto chain = [&](const SaddleConnection& c) {
    std::vector<Rational> v(ne, Rational(0));
    auto add = [&](int t, int a, int b) {
      if (a == b) return;
      if (b == (a + 1) % 3)
        v[eid[t][a]] += esign[t][a];
      else
        v[eid[t][b]] -= esign[t][b];
    };
    Trace tr = trace_of(s, c);
    int a = c.start_corner % 3;
    check_internal(tr.steps.front().tri == c.start_corner / 3, "trace does not start at its corner");
    for (std::size_t i = 0; i < tr.steps.size(); ++i) {
      const TraceStep& st = tr.steps[i];
      if (st.exit_edge >= 0) {
        add(st.tri, a, st.exit_edge);
        a = (s.tri(st.tri).nbr_edge[st.exit_edge] + 1) % 3;
      } else {
        check_internal(tr.end_corner / 3 == st.tri, "trace ends outside its last triangle");
        add(st.tri, a, tr.end_corner % 3);
      }
    }
    return v;
  };

  const FieldElement half = s.field()->from_rational(Rational(1, 2));
  Rational tr_rel = 0;
  for (int j = 0; j < ne; ++j) {
    if (q.is_pivot[j]) continue;
    auto [t, k] = rep[j];
    const Triangle& T = s.tri(t);
    Vec2 a = T.v[k], b = T.v[(k + 1) % 3];
    SurfacePoint mid{T.poly, a + half * (b - a)};
    auto pi = f.map().piece_at(mid);
    check_internal(pi.has_value(), "edge midpoint outside every map piece");
    const MapPiece& pc = f.map().pieces()[*pi];
    Vec2 h = pc.D * (b - a);
    Trace back = s.trace_from_point({pc.dst, pc.D * mid.p + pc.t}, Rational(-1, 2) * h, s.field()->one(), true);
    check_internal(back.end_corner >= 0 && back.t_end == s.field()->one(), "image of an edge is not a saddle connection");
    SaddleConnection img = saddle_from(s, back.end_corner, back.steps.back().T.inverse().linear(h));
    auto v = chain(img);
    q.reduce(v);
    tr_rel += v[j];
  }
  // H1(S) -> H1(S, V) -> reduced H0(V) is exact; the last trace is #fixed - 1
  int fixed_vertices = 0;
  const auto& perm = f.vertex_permutation();
  for (int v = 0; v < s.num_vertices(); ++v) fixed_vertices += perm[v] == v;
  Rational tr_abs = tr_rel - (fixed_vertices - 1);
  check_internal(tr_abs.get_den() == 1, "non-integral homology trace");
  return 2 - static_cast<int>(tr_abs.get_num().get_si());
}

// ---------------------------------------------------------------------------
// crossing-matrix bound

MarkovBound markov_upper_bound(const AffineAutomorphism& f) {
  Section T0 = complete_to_section(f.surface(), {});
  return markov_upper_bound(f, annular_avoiding_f_section(f, T0));
}

MarkovBound markov_upper_bound(const AffineAutomorphism& f, const Section& T) {
  const int n = T.size();
  MarkovBound mb;
  mb.matrix.assign(n, std::vector<long>(n, 0));
  std::vector<VEdge> img;
  for (const auto& e : T.edges()) img.push_back(image_edge(f.map(), e));
  long trace = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const VEdge& e = T.edges()[i];
      mb.matrix[i][j] = same_edge(e, img[j]) ? 0 : intersection_number(e, img[j]);
      if (i == j) trace += mb.matrix[i][j];
    }
  // each regular fixed point lies in some rectangle R_e, which holds at most
  // i(e, f(e)) of them; singular ones are at most the vertices
  mb.upper_bound = trace + f.surface()->num_vertices();

  std::vector<Rational> x(n, Rational(1));
  auto bracket = [&]() {
    Rational lo = -1, hi = -1;
    for (int i = 0; i < n; ++i) {
      Rational y = 0;
      for (int j = 0; j < n; ++j) y += mb.matrix[i][j] * x[j];
      Rational r = y / x[i];
      if (lo < 0 || r < lo) lo = r;
      if (hi < 0 || r > hi) hi = r;
    }
    return std::make_pair(lo, hi);
  };
  for (int it = 0; it < 40; ++it) {
    std::vector<Rational> y(n, Rational(0));
    Rational sum = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) y[i] += mb.matrix[i][j] * x[j];
      sum += y[i];
    }
    bool positive = true;
    for (auto& v : y) positive = positive && v > 0;
    if (!positive || sum == 0) break;
    // keep the rationals small: normalize and round to 2^-64
    for (int i = 0; i < n; ++i) {
      Rational scaled = y[i] / sum * Rational(mpz_class(1) << 64);
      mpz_class num = scaled.get_num() / scaled.get_den();
      x[i] = Rational(num + 1, mpz_class(1) << 64);
      x[i].canonicalize();
    }
  }
  std::tie(mb.perron_lo, mb.perron_hi) = bracket();
  return mb;
}

}  // namespace veerfix
