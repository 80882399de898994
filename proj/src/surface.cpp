#include <algorithm>
#include <numeric>
#include <set>

#include "veerfix/flatsurf.hpp"

namespace veerfix {

namespace {

int half(const Vec2& d) { return (d.y.sign() > 0 || (d.y.sign() == 0 && d.x.sign() > 0)) ? 0 : 1; }

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::shared_ptr<const FlatSurface> FlatSurface::validate(const SurfaceSpec& spec) {
  auto s = std::shared_ptr<FlatSurface>(new FlatSurface());
  s->spec_ = spec;
  const auto& polys = spec.polygons;
  const int np = static_cast<int>(polys.size());
  if (np == 0) fail(ErrorKind::DegenerateInput, "surface has no polygons");
  for (int p = 0; p < np; ++p) {
    const auto& poly = polys[p].vertices;
    for (const auto& v : poly)
      if (v.x.field().get() != spec.field.get() || v.y.field().get() != spec.field.get())
        fail(ErrorKind::FieldMismatch, "polygon " + polys[p].name + " has coordinates outside the surface field");
    if (!is_strictly_convex(poly))
      fail(ErrorKind::NonConvexPolygon, "polygon " + polys[p].name + " is not strictly convex and counterclockwise");
  }

  // gluings
  s->glue_.assign(np, {});
  std::vector<std::vector<int>> seen(np);
  for (int p = 0; p < np; ++p) {
    s->glue_[p].assign(polys[p].vertices.size(), EdgeGlue{-1, -1, {}});
    seen[p].assign(polys[p].vertices.size(), 0);
  }
  auto edge_vec = [&](int p, int e) {
    const auto& v = polys[p].vertices;
    return v[(e + 1) % v.size()] - v[e];
  };
  auto check_edge = [&](int p, int e) {
    if (p < 0 || p >= np || e < 0 || e >= static_cast<int>(polys[p].vertices.size()))
      fail(ErrorKind::UnmatchedEdge, "gluing refers to a nonexistent edge");
  };
  for (const auto& g : spec.gluings) {
    check_edge(g.poly_a, g.edge_a);
    check_edge(g.poly_b, g.edge_b);
    if (g.poly_a == g.poly_b && g.edge_a == g.edge_b)
      fail(ErrorKind::UnmatchedEdge, "edge " + polys[g.poly_a].name + "." + std::to_string(g.edge_a) + " glued to itself");
    if (seen[g.poly_a][g.edge_a]++ || seen[g.poly_b][g.edge_b]++)
      fail(ErrorKind::UnmatchedEdge, "edge glued twice");
    Vec2 ea = edge_vec(g.poly_a, g.edge_a), eb = edge_vec(g.poly_b, g.edge_b);
    const auto& va = polys[g.poly_a].vertices;
    const auto& vb = polys[g.poly_b].vertices;
    const Vec2& a0 = va[g.edge_a];
    const Vec2& b1 = vb[(g.edge_b + 1) % vb.size()];
    Xform to;
    if (!g.halfturn) {
      if (ea != -eb)
        fail(ErrorKind::LengthMismatch, "edges " + polys[g.poly_a].name + "." + std::to_string(g.edge_a) + " and " +
                                            polys[g.poly_b].name + "." + std::to_string(g.edge_b) +
                                            " are not related by a translation");
      to = Xform{1, b1 - a0};
    } else {
      if (ea != eb)
        fail(ErrorKind::LengthMismatch, "edges " + polys[g.poly_a].name + "." + std::to_string(g.edge_a) + " and " +
                                            polys[g.poly_b].name + "." + std::to_string(g.edge_b) +
                                            " are not related by a half-turn");
      to = Xform{-1, b1 + a0};
      s->has_halfturns_ = true;
    }
    s->glue_[g.poly_a][g.edge_a] = {g.poly_b, g.edge_b, to};
    s->glue_[g.poly_b][g.edge_b] = {g.poly_a, g.edge_a, to.inverse()};
  }
  for (int p = 0; p < np; ++p)
    for (std::size_t e = 0; e < polys[p].vertices.size(); ++e)
      if (!seen[p][e]) fail(ErrorKind::UnmatchedEdge, "edge " + polys[p].name + "." + std::to_string(e) + " is not glued");
  s->num_edges_ = static_cast<int>(spec.gluings.size());

  // vertex classes
  std::vector<int> offset(np + 1, 0);
  for (int p = 0; p < np; ++p) offset[p + 1] = offset[p] + static_cast<int>(polys[p].vertices.size());
  UnionFind uf(offset[np]);
  for (const auto& g : spec.gluings) {
    int na = static_cast<int>(polys[g.poly_a].vertices.size()), nb = static_cast<int>(polys[g.poly_b].vertices.size());
    uf.unite(offset[g.poly_a] + g.edge_a, offset[g.poly_b] + (g.edge_b + 1) % nb);
    uf.unite(offset[g.poly_a] + (g.edge_a + 1) % na, offset[g.poly_b] + g.edge_b);
  }
  std::map<int, int> class_of_root;
  s->vclass_.assign(np, {});
  for (int p = 0; p < np; ++p)
    for (std::size_t v = 0; v < polys[p].vertices.size(); ++v) {
      int r = uf.find(offset[p] + static_cast<int>(v));
      auto it = class_of_root.find(r);
      if (it == class_of_root.end()) it = class_of_root.emplace(r, static_cast<int>(class_of_root.size())).first;
      s->vclass_[p].push_back(it->second);
    }
  const int nv = static_cast<int>(class_of_root.size());

  // cone angles: walk polygon corners counterclockwise around each class and
  // count how often the developed direction crosses a half-plane boundary
  s->cones_.assign(nv, ConePoint{0, 0, false});
  std::vector<int> done(nv, 0);
  for (int p = 0; p < np; ++p)
    for (std::size_t v0 = 0; v0 < polys[p].vertices.size(); ++v0) {
      int cls = s->vclass_[p][v0];
      if (done[cls]) continue;
      done[cls] = 1;
      int cp = p, cv = static_cast<int>(v0), sgn = 1, changes = 0, guard = 0;
      do {
        const auto& vs = polys[cp].vertices;
        int n = static_cast<int>(vs.size());
        Vec2 out = vs[(cv + 1) % n] - vs[cv];
        Vec2 in = vs[(cv + n - 1) % n] - vs[cv];
        if (sgn < 0) {
          out = -out;
          in = -in;
        }
        if (half(out) != half(in)) ++changes;
        // next corner across edge cv-1 -> cv
        const EdgeGlue& g = s->glue_[cp][(cv + n - 1) % n];
        sgn *= g.to.s;
        cp = g.poly;
        cv = g.edge;
        if (++guard > offset[np] + 1) fail(ErrorKind::Internal, "vertex walk does not close");
      } while (!(cp == p && cv == static_cast<int>(v0)));
      s->cones_[cls] = ConePoint{cls, changes, false};
    }

  for (const auto& [p, v] : spec.marks) {
    if (p < 0 || p >= np || v < 0 || v >= static_cast<int>(polys[p].vertices.size()))
      fail(ErrorKind::Parse, "mark refers to a nonexistent vertex");
    auto& c = s->cones_[s->vclass_[p][v]];
    if (c.angle_pi != 2)
      fail(ErrorKind::DegenerateInput, "marked vertex " + polys[p].name + "." + std::to_string(v) + " has angle " +
                                           std::to_string(c.angle_pi) + "pi, not 2pi");
    c.marked = true;
  }
  int gb = 0;
  for (const auto& c : s->cones_) {
    if (c.angle_pi <= 0) fail(ErrorKind::GaussBonnetViolation, "vertex with nonpositive angle");
    if (c.angle_pi == 2 && !c.marked)
      fail(ErrorKind::DegenerateInput, "vertex class " + std::to_string(c.id) + " has angle 2pi but is not marked");
    if (!s->has_halfturns_ && c.angle_pi % 2 != 0)
      fail(ErrorKind::GaussBonnetViolation, "odd multiple of pi on a translation surface");
    gb += c.angle_pi - 2;
  }
  int chi = nv - s->num_edges_ + np;
  if (gb != -2 * chi)
    fail(ErrorKind::GaussBonnetViolation,
         "sum of (angle/pi - 2) is " + std::to_string(gb) + " but -2 chi is " + std::to_string(-2 * chi));

  // fan triangulation
  s->poly_tris_.assign(np, {});
  std::vector<std::vector<std::pair<int, int>>> edge_slot(np);  // polygon edge -> (tri, edge)
  for (int p = 0; p < np; ++p) {
    const auto& vs = polys[p].vertices;
    int n = static_cast<int>(vs.size());
    edge_slot[p].assign(n, {-1, -1});
    for (int k = 1; k <= n - 2; ++k) {
      Triangle t;
      t.poly = p;
      t.pv = {0, k, k + 1};
      t.v = {vs[0], vs[k], vs[k + 1]};
      t.on_boundary = {k == 1, true, k == n - 2};
      int id = static_cast<int>(s->tris_.size());
      Xform id_x = Xform::identity(spec.field);
      t.to_nbr = {id_x, id_x, id_x};
      t.nbr = {-1, -1, -1};
      t.nbr_edge = {-1, -1, -1};
      if (k > 1) {
        t.nbr[0] = id - 1;
        t.nbr_edge[0] = 2;
      }
      if (k < n - 2) {
        t.nbr[2] = id + 1;
        t.nbr_edge[2] = 0;
      }
      s->tris_.push_back(t);
      s->poly_tris_[p].push_back(id);
      if (k == 1) edge_slot[p][0] = {id, 0};
      edge_slot[p][k] = {id, 1};
      if (k == n - 2) edge_slot[p][n - 1] = {id, 2};
    }
  }
  for (int p = 0; p < np; ++p)
    for (std::size_t e = 0; e < polys[p].vertices.size(); ++e) {
      auto [t, te] = edge_slot[p][e];
      const EdgeGlue& g = s->glue_[p][e];
      auto [t2, te2] = edge_slot[g.poly][g.edge];
      s->tris_[t].nbr[te] = t2;
      s->tris_[t].nbr_edge[te] = te2;
      s->tris_[t].to_nbr[te] = g.to;
    }

  // corners around each vertex, counterclockwise
  s->vcorners_.assign(nv, {});
  for (int c0 = 0; c0 < static_cast<int>(3 * s->tris_.size()); ++c0) {
    int v = s->corner_vertex(c0);
    if (!s->vcorners_[v].empty()) continue;
    int c = c0;
    do {
      s->vcorners_[v].push_back(c);
      c = s->next_ccw(c).first;
    } while (c != c0);
  }
  return s;
}

int FlatSurface::polygon_index(const std::string& name) const {
  for (int i = 0; i < num_polygons(); ++i)
    if (spec_.polygons[i].name == name) return i;
  return -1;
}

FieldElement FlatSurface::area() const {
  FieldElement a = field()->zero();
  for (const auto& p : spec_.polygons) a += signed_area2(p.vertices);
  return a * Rational(1, 2);
}

Vec2 FlatSurface::corner_out(int c) const {
  const auto& t = tris_[c / 3];
  return t.v[(c % 3 + 1) % 3] - t.v[c % 3];
}

Vec2 FlatSurface::corner_in(int c) const {
  const auto& t = tris_[c / 3];
  return t.v[(c % 3 + 2) % 3] - t.v[c % 3];
}

std::pair<int, Xform> FlatSurface::next_ccw(int c) const {
  const auto& t = tris_[c / 3];
  int e = (c % 3 + 2) % 3;  // edge from the previous vertex to this one
  return {3 * t.nbr[e] + t.nbr_edge[e], t.to_nbr[e]};
}

bool FlatSurface::wedge_contains(int c, const Vec2& dir) const {
  Vec2 out = corner_out(c), in = corner_in(c);
  int co = cross(out, dir).sign();
  if (co < 0) return false;
  if (co == 0 && dot(out, dir).sign() <= 0) return false;
  return cross(dir, in).sign() > 0;
}

std::pair<int, Xform> FlatSurface::corner_containing(int c, const Vec2& dir) const {
  Xform X = Xform::identity(field());
  int cur = c;
  const int limit = static_cast<int>(vcorners_[corner_vertex(c)].size());
  for (int i = 0; i <= limit; ++i) {
    if (wedge_contains(cur, X.linear(dir))) return {cur, X};
    auto [nxt, Y] = next_ccw(cur);
    X = Y * X;
    cur = nxt;
  }
  fail(ErrorKind::Internal, "no corner contains direction " + dir.to_string());
}

std::pair<int, Xform> FlatSurface::corner_after(int c, const Vec2& ref, const Vec2& dir) const {
  if (wedge_contains(c, dir)) {
    int s = cross(ref, dir).sign();
    if (s > 0 || (s == 0 && dot(ref, dir).sign() > 0)) return {c, Xform::identity(field())};
  }
  auto [nxt, Y] = next_ccw(c);
  auto [r, X] = corner_containing(nxt, Y.linear(dir));
  return {r, X * Y};
}

Where FlatSurface::locate_in_polygon(int poly, const Vec2& x, int* index) const {
  const Polygon& p = polygon(poly);
  int zeros = 0, last = -1, first = -1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    int o = orient(p[i], p[(i + 1) % p.size()], x);
    if (o < 0) return Where::Outside;
    if (o == 0) {
      if (first < 0) first = static_cast<int>(i);
      last = static_cast<int>(i);
      ++zeros;
    }
  }
  if (zeros == 0) return Where::Interior;
  if (zeros == 1) {
    if (index) *index = last;
    return Where::Edge;
  }
  // on two consecutive edges: the shared vertex
  int n = static_cast<int>(p.size());
  if (index) *index = (first == 0 && last == n - 1) ? 0 : last;
  return Where::Vertex;
}

PointKey FlatSurface::canonical(const SurfacePoint& pt) const {
  int idx = -1;
  Where w = locate_in_polygon(pt.poly, pt.p, &idx);
  switch (w) {
    case Where::Outside:
      fail(ErrorKind::Internal, "point " + pt.p.to_string() + " outside polygon " + polygon_name(pt.poly));
    case Where::Vertex:
      return PointKey{vclass_[pt.poly][idx], -1, {}};
    case Where::Interior:
      return PointKey{-1, pt.poly, pt.p};
    case Where::Edge: {
      const EdgeGlue& g = glue_[pt.poly][idx];
      PointKey a{-1, pt.poly, pt.p}, b{-1, g.poly, g.to(pt.p)};
      return b < a ? b : a;
    }
  }
  return {};
}

std::vector<ChartRep> FlatSurface::representatives(const SurfacePoint& pt) const {
  std::vector<ChartRep> out;
  int idx = -1;
  Where w = locate_in_polygon(pt.poly, pt.p, &idx);
  Xform id = Xform::identity(field());
  auto add_poly = [&](int poly, const Vec2& x, const Xform& X) {
    for (int t : poly_tris_[poly])
      if (in_closed(Polygon(tris_[t].v.begin(), tris_[t].v.end()), x)) out.push_back({t, x, X});
  };
  switch (w) {
    case Where::Outside:
      fail(ErrorKind::Internal, "point outside polygon");
    case Where::Interior:
      add_poly(pt.poly, pt.p, id);
      break;
    case Where::Edge: {
      add_poly(pt.poly, pt.p, id);
      const EdgeGlue& g = glue_[pt.poly][idx];
      add_poly(g.poly, g.to(pt.p), g.to);
      break;
    }
    case Where::Vertex: {
      // chart maps for vertex representatives are the translations matching
      // the vertex positions; only meaningful on translation surfaces
      const Vec2& base = pt.p;
      for (int c : vcorners_[vclass_[pt.poly][idx]])
        out.push_back({c / 3, corner_pos(c), Xform{1, corner_pos(c) - base}});
      break;
    }
  }
  return out;
}

ChartRep FlatSurface::start_for(const SurfacePoint& pt, const Vec2& dir) const {
  int idx = -1;
  Where w = locate_in_polygon(pt.poly, pt.p, &idx);
  if (w == Where::Vertex) fail(ErrorKind::Internal, "start_for called at a cone point");
  if (dir.is_zero()) fail(ErrorKind::DegenerateInput, "zero direction");
  for (const auto& c : representatives(pt)) {
    const auto& t = tris_[c.tri];
    Vec2 d = c.X.linear(dir);
    bool ok = true;
    for (int k = 0; k < 3 && ok; ++k) {
      const Vec2& a = t.v[k];
      const Vec2& b = t.v[(k + 1) % 3];
      if (orient(a, b, c.q) != 0) continue;
      int s = cross(b - a, d).sign();
      if (s < 0 || (s == 0 && dot(b - a, d).sign() <= 0)) ok = false;
    }
    if (ok) return c;
  }
  fail(ErrorKind::Internal, "no triangle contains the outgoing direction");
}

}  // namespace veerfix
