#include <deque>
#include <map>

#include "veerfix/flatsurf.hpp"

namespace veerfix {

namespace {

struct NodeKey {
  int tri;
  Xform T;
  bool operator<(const NodeKey& o) const {
    if (tri != o.tri) return tri < o.tri;
    return key_less(T, o.T);
  }
};

Polygon developed_triangle(const Triangle& t, const Xform& T) { return {T(t.v[0]), T(t.v[1]), T(t.v[2])}; }

}  // namespace

DevelopResult FlatSurface::develop_region(const Polygon& region, int tri0, const Xform& T0, bool stop_on_vertex) const {
  DevelopResult res;
  std::map<NodeKey, char> visited;
  std::deque<NodeKey> queue{{tri0, T0}};
  visited.emplace(NodeKey{tri0, T0}, 1);
  while (!queue.empty()) {
    NodeKey cur = std::move(queue.front());
    queue.pop_front();
    const Triangle& t = tris_[cur.tri];
    Polygon dev = developed_triangle(t, cur.T);
    Polygon piece = clip_convex(region, dev);
    if (piece.empty()) continue;
    for (const auto& w : dev)
      if (locate_in_convex(region, w) == Where::Interior) {
        res.hit_vertex = true;
        if (stop_on_vertex) return res;
      }
    for (int k = 0; k < 3; ++k) {
      // cross only where the piece has a positive-length side on this edge
      int on = 0;
      for (const auto& p : piece)
        if (orient(dev[k], dev[(k + 1) % 3], p) == 0) ++on;
      if (on < 2) continue;
      NodeKey nk{t.nbr[k], cur.T * t.to_nbr[k].inverse()};
      if (visited.emplace(nk, 1).second) queue.push_back(std::move(nk));
    }
    res.pieces.push_back({cur.tri, cur.T, std::move(piece)});
  }
  return res;
}

Trace FlatSurface::trace_from(int tri0, const Vec2& chart, const Vec2& dir, const FieldElement& tmax,
                              bool stop_at_vertex) const {
  if (dir.is_zero()) fail(ErrorKind::DegenerateInput, "zero direction");
  Trace tr;
  tr.origin = chart;
  tr.dir = dir;
  const FieldElement zero = field()->zero();
  int tri = tri0, entry = -1;
  Xform T = Xform::identity(field());
  Vec2 q = chart;
  FieldElement t_cur = zero;
  const FieldElement vv = dot(dir, dir);
  const std::size_t guard = 50'000'000;
  while (tr.steps.size() < guard) {
    const Triangle& t = tris_[tri];
    Vec2 d = T.s > 0 ? dir : -dir;
    int side[3];
    for (int k = 0; k < 3; ++k) side[k] = cross(d, t.v[k] - q).sign();
    int ahead = -1;
    for (int k = 0; k < 3; ++k)
      if (side[k] == 0 && dot(t.v[k] - q, d).sign() > 0) ahead = k;
    if (ahead >= 0) {
      FieldElement th = t_cur + dot(t.v[ahead] - q, d) / vv;
      int c = compare(th, tmax);
      if (c > 0) {
        tr.steps.push_back({tri, T, t_cur, tmax, entry, -1});
        tr.t_end = tmax;
        return tr;
      }
      if (c < 0 && !stop_at_vertex)
        fail(ErrorKind::PassesThroughSingularity, "segment from " + chart.to_string() + " along " + dir.to_string() +
                                                      " meets a cone point in its interior");
      tr.steps.push_back({tri, T, t_cur, th, entry, -1});
      tr.t_end = th;
      tr.end_corner = 3 * tri + ahead;
      return tr;
    }
    int exit = -1;
    for (int k = 0; k < 3; ++k)
      if (side[k] < 0 && side[(k + 1) % 3] > 0) exit = k;
    check_internal(exit >= 0, "trace: no exit edge");
    Vec2 e = t.v[(exit + 1) % 3] - t.v[exit];
    FieldElement s = cross(t.v[exit] - q, e) / cross(d, e);
    FieldElement te = t_cur + s;
    if (compare(te, tmax) >= 0) {
      tr.steps.push_back({tri, T, t_cur, tmax, entry, -1});
      tr.t_end = tmax;
      return tr;
    }
    tr.steps.push_back({tri, T, t_cur, te, entry, exit});
    Vec2 exit_pt = q + s * d;
    const Xform& G = t.to_nbr[exit];
    q = G(exit_pt);
    T = T * G.inverse();
    entry = t.nbr_edge[exit];
    tri = t.nbr[exit];
    t_cur = te;
  }
  fail(ErrorKind::Internal, "trace exceeded the step limit");
}

Trace FlatSurface::trace_from_point(const SurfacePoint& p, const Vec2& dir, const FieldElement& tmax,
                                    bool stop_at_vertex) const {
  ChartRep r = start_for(p, dir);
  Trace tr = trace_from(r.tri, r.q, r.X.linear(dir), tmax, stop_at_vertex);
  // re-express in the chart of p
  Xform back = r.X.inverse();
  for (auto& st : tr.steps) st.T = back * st.T;
  tr.origin = p.p;
  tr.dir = dir;
  return tr;
}

Trace FlatSurface::trace_from_corner(int corner, const Vec2& dir, const FieldElement& tmax, bool stop_at_vertex) const {
  auto [c, X] = corner_containing(corner, dir);
  Trace tr = trace_from(c / 3, corner_pos(c), X.linear(dir), tmax, stop_at_vertex);
  Xform back = X.inverse();
  for (auto& st : tr.steps) st.T = back * st.T;
  tr.origin = back(corner_pos(c));
  tr.dir = dir;
  return tr;
}

}  // namespace veerfix
