#include "veerfix/veering.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

namespace veerfix {

VEdge make_vedge(const FlatSurface& s, const SaddleConnection& c) {
  if (c.hol.x.is_zero() || c.hol.y.is_zero())
    fail(ErrorKind::HorizontalOrVertical, "edge " + c.hol.to_string() + " is parallel to a foliation");
  VEdge e;
  if (c.hol.x.sign() > 0) {
    e.fwd = c;
    e.rev = reversed(s, c);
  } else {
    e.rev = c;
    e.fwd = reversed(s, c);
  }
  e.segs = chart_segments(trace_of(s, e.fwd));
  return e;
}

bool key_less(const VEdge& a, const VEdge& b) { return key_less(a.fwd, b.fwd); }
bool same_edge(const VEdge& a, const VEdge& b) { return same_oriented(a.fwd, b.fwd); }

int intersection_number(const VEdge& a, const VEdge& b) {
  if (same_edge(a, b)) fail(ErrorKind::OverlappingSegments, "an edge meets itself");
  return crossing_count(a.segs, b.segs);
}

bool edges_cross(const VEdge& a, const VEdge& b) { return !same_edge(a, b) && crossing_count(a.segs, b.segs) > 0; }

std::string to_string(Order o) {
  switch (o) {
    case Order::Below:
      return "below";
    case Order::Above:
      return "above";
    case Order::Disjoint:
      return "disjoint";
    case Order::Equal:
      return "equal";
  }
  return "?";
}

Order edge_order(const VEdge& a, const VEdge& b) {
  if (same_edge(a, b)) return Order::Equal;
  if (!edges_cross(a, b)) return Order::Disjoint;
  // crossing veering edges: the wider one runs across the other's rectangle
  return compare(a.hol().x, b.hol().x) > 0 ? Order::Below : Order::Above;
}

// ---------------------------------------------------------------------------
// sections

void Section::build_faces() {
  const FlatSurface& s = *s_;
  const int nd = 2 * size();
  std::vector<int> cpos(3 * s.triangles().size(), -1);
  for (int v = 0; v < s.num_vertices(); ++v) {
    const auto& cs = s.vertex_corners(v);
    for (std::size_t i = 0; i < cs.size(); ++i) cpos[cs[i]] = static_cast<int>(i);
  }
  std::vector<std::vector<int>> around(s.num_vertices());
  for (int d = 0; d < nd; ++d) around[dart(d).start].push_back(d);
  std::vector<int> prev(nd, -1);
  for (auto& list : around) {
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      const auto& da = dart(a);
      const auto& db = dart(b);
      if (cpos[da.start_corner] != cpos[db.start_corner]) return cpos[da.start_corner] < cpos[db.start_corner];
      return cross(da.hol, db.hol).sign() > 0;
    });
    for (std::size_t i = 0; i < list.size(); ++i) prev[list[i]] = list[(i + list.size() - 1) % list.size()];
  }
  next_.assign(nd, -1);
  for (int d = 0; d < nd; ++d) next_[d] = prev[d ^ 1];
  face_of_dart_.assign(nd, -1);
  faces_.clear();
  for (int d = 0; d < nd; ++d) {
    if (face_of_dart_[d] >= 0) continue;
    int a = d, b = next_[a], c = next_[b];
    if (next_[c] != a || a == b || b == c || a == c)
      fail(ErrorKind::DegenerateInput, "edges do not form a triangulation");
    int id = static_cast<int>(faces_.size());
    faces_.push_back({{a, b, c}});
    face_of_dart_[a] = face_of_dart_[b] = face_of_dart_[c] = id;
  }
}

Section Section::from_edges(SurfacePtr s, std::vector<VEdge> edges, bool check_veering) {
  Section T;
  T.s_ = std::move(s);
  std::sort(edges.begin(), edges.end(), [](const VEdge& a, const VEdge& b) { return key_less(a, b); });
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (same_edge(edges[i - 1], edges[i])) fail(ErrorKind::NotNoncrossing, "repeated edge");
  if (static_cast<int>(edges.size()) != T.s_->section_size())
    fail(ErrorKind::DegenerateInput, "a section has " + std::to_string(T.s_->section_size()) + " edges, got " +
                                         std::to_string(edges.size()));
  if (check_veering) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
      for (std::size_t j = i + 1; j < edges.size(); ++j)
        if (crossing_count(edges[i].segs, edges[j].segs) > 0)
          fail(ErrorKind::NotNoncrossing, "edges " + edges[i].fwd.to_string() + " and " + edges[j].fwd.to_string() + " cross");
      if (!is_veering_edge(*T.s_, edges[i].fwd))
        fail(ErrorKind::DegenerateInput, "edge " + edges[i].fwd.to_string() + " is not a veering edge");
    }
  }
  T.edges_ = std::move(edges);
  T.build_faces();
  return T;
}

std::optional<int> Section::find(const VEdge& e) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e, [](const VEdge& a, const VEdge& b) { return key_less(a, b); });
  if (it != edges_.end() && same_edge(*it, e)) return static_cast<int>(it - edges_.begin());
  return std::nullopt;
}

namespace {

const FieldElement& width(const Section& T, int d) { return T.edges()[d / 2].hol().x; }
FieldElement height(const Section& T, int d) { return T.edges()[d / 2].hol().y.abs(); }

bool extreme_in_face(const Section& T, int face, int dart, bool wide) {
  for (int d : T.faces()[face].darts) {
    if (d / 2 == dart / 2) continue;
    int c = wide ? compare(width(T, dart), width(T, d)) : compare(height(T, dart), height(T, d));
    if (c <= 0) return false;
  }
  return true;
}

}  // namespace

bool Section::upward_flippable(int i) const {
  auto [l, r] = adjacent_faces(i);
  return l != r && extreme_in_face(*this, l, 2 * i, true) && extreme_in_face(*this, r, 2 * i, true);
}

bool Section::downward_flippable(int i) const {
  auto [l, r] = adjacent_faces(i);
  return l != r && extreme_in_face(*this, l, 2 * i, false) && extreme_in_face(*this, r, 2 * i, false);
}

VEdge Section::flipped_edge(int i) const {
  int a = next_[2 * i];
  int d = next_[next_[2 * i + 1]];
  const SaddleConnection& sd = dart(d);
  Vec2 h = sd.hol + dart(a).hol;
  auto [corner, X] = s_->corner_after(sd.start_corner, sd.hol, h);
  return make_vedge(*s_, saddle_from(*s_, corner, X.linear(h)));
}

Section Section::flip_up(int i) const {
  if (!upward_flippable(i)) fail(ErrorKind::NotFlippable, "edge " + edges_[i].fwd.to_string() + " is not upward flippable");
  std::vector<VEdge> es = edges_;
  es[i] = flipped_edge(i);
  return from_edges(s_, std::move(es), false);
}

Section Section::flip_down(int i) const {
  if (!downward_flippable(i))
    fail(ErrorKind::NotFlippable, "edge " + edges_[i].fwd.to_string() + " is not downward flippable");
  std::vector<VEdge> es = edges_;
  es[i] = flipped_edge(i);
  return from_edges(s_, std::move(es), false);
}

bool operator==(const Section& a, const Section& b) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i)
    if (!same_edge(a.edges()[i], b.edges()[i])) return false;
  return true;
}

std::string Section::to_string() const {
  std::string out;
  for (const auto& e : edges_) out += e.fwd.to_string() + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// completion and extremal sections

std::vector<VEdge> veering_edges_in_box(const FlatSurface& s, const FieldElement& bx, const FieldElement& by) {
  std::vector<VEdge> out;
  for (const auto& c : enumerate_saddles(s, bx, by)) {
    if (c.hol.x.sign() <= 0 || c.hol.y.is_zero()) continue;
    if (!is_veering_edge(s, c)) continue;
    out.push_back(make_vedge(s, c));
  }
  std::stable_sort(out.begin(), out.end(), [](const VEdge& a, const VEdge& b) {
    int c = compare((a.hol().x * a.hol().y).abs(), (b.hol().x * b.hol().y).abs());
    if (c != 0) return c < 0;
    return key_less(a, b);
  });
  return out;
}

namespace {

FieldElement initial_box(const FlatSurface& s) {
  Rational m(1);
  for (int p = 0; p < s.num_polygons(); ++p)
    for (const auto& v : s.polygon(p))
      for (const auto* x : {&v.x, &v.y}) {
        Rational c = ceil_of(x->abs());
        if (c > m) m = c;
      }
  return s.field()->from_rational(2 * m);
}

// Completions on one surface reuse the same boxes; keep their enumerations
// while the surface is alive.
std::vector<VEdge> cached_edges_in_box(const SurfacePtr& s, const FieldElement& B) {
  struct Entry {
    std::weak_ptr<const FlatSurface> owner;
    std::map<std::string, std::vector<VEdge>> boxes;
  };
  static std::mutex mu;
  static std::map<const FlatSurface*, Entry> cache;
  std::lock_guard<std::mutex> lock(mu);
  for (auto it = cache.begin(); it != cache.end();)
    it = it->second.owner.expired() ? cache.erase(it) : std::next(it);
  Entry& e = cache[s.get()];
  if (e.owner.lock() != s) e = Entry{s, {}};
  auto [it, fresh] = e.boxes.try_emplace(B.to_string());
  if (fresh) it->second = veering_edges_in_box(*s, B, B);
  return it->second;
}

}  // namespace

Section complete_to_section(const SurfacePtr& s, const std::vector<VEdge>& K) {
  for (std::size_t i = 0; i < K.size(); ++i)
    for (std::size_t j = i + 1; j < K.size(); ++j)
      if (edges_cross(K[i], K[j])) fail(ErrorKind::NotNoncrossing, "input edges cross");
  const std::size_t N = static_cast<std::size_t>(s->section_size());
  FieldElement B = initial_box(*s);
  for (int round = 0; round < 16; ++round, B = B * Rational(2)) {
    std::vector<VEdge> chosen;
    for (const auto& k : K)
      if (std::none_of(chosen.begin(), chosen.end(), [&](const VEdge& c) { return same_edge(c, k); })) chosen.push_back(k);
    for (const auto& c : cached_edges_in_box(s, B)) {
      if (chosen.size() == N) break;
      bool ok = true;
      for (const auto& x : chosen)
        if (same_edge(x, c) || crossing_count(x.segs, c.segs) > 0) {
          ok = false;
          break;
        }
      if (ok) chosen.push_back(c);
    }
    if (chosen.size() == N) return Section::from_edges(s, std::move(chosen), false);
  }
  fail(ErrorKind::Internal, "section completion did not terminate");
}

namespace {

constexpr int kFlipGuard = 200000;

Section extremal(const SurfacePtr& s, const VEdge& e, bool up) {
  Section T = complete_to_section(s, {e});
  for (int guard = 0; guard < kFlipGuard; ++guard) {
    int pick = -1;
    for (int i = 0; i < T.size(); ++i) {
      if (same_edge(T.edges()[i], e)) continue;
      if (up ? T.upward_flippable(i) : T.downward_flippable(i)) {
        pick = i;
        break;
      }
    }
    if (pick < 0) return T;
    T = up ? T.flip_up(pick) : T.flip_down(pick);
  }
  fail(ErrorKind::Internal, "extremal section search did not terminate");
}

/// Flips edges of `a` toward `b` until no edge of a lies on the wrong side
/// of an edge of b.
Section sweep(const Section& a, const Section& b, bool up, int* flips) {
  Section T = a;
  int count = 0;
  for (int guard = 0; guard < kFlipGuard; ++guard) {
    int pick = -1;
    bool pending = false;
    for (int i = 0; i < T.size() && pick < 0; ++i) {
      const VEdge& e = T.edges()[i];
      if (b.contains(e)) continue;
      bool wrong = false;
      for (const auto& x : b.edges()) {
        Order o = edge_order(e, x);
        if ((up && o == Order::Below) || (!up && o == Order::Above)) {
          wrong = true;
          break;
        }
      }
      if (!wrong) continue;
      pending = true;
      if (up ? T.upward_flippable(i) : T.downward_flippable(i)) pick = i;
    }
    if (pick < 0) {
      check_internal(!pending, "sweep stalled with no flippable edge");
      if (flips) *flips = count;
      return T;
    }
    T = up ? T.flip_up(pick) : T.flip_down(pick);
    ++count;
  }
  fail(ErrorKind::Internal, "section sweep did not terminate");
}

}  // namespace

Section t_plus(const SurfacePtr& s, const VEdge& e) { return extremal(s, e, true); }
Section t_minus(const SurfacePtr& s, const VEdge& e) { return extremal(s, e, false); }

Section section_max(const Section& a, const Section& b, int* flips) { return sweep(a, b, true, flips); }
Section section_min(const Section& a, const Section& b, int* flips) { return sweep(a, b, false, flips); }

bool section_leq(const Section& a, const Section& b) {
  for (const auto& x : a.edges()) {
    if (b.contains(x)) continue;
    for (const auto& y : b.edges())
      if (edge_order(x, y) == Order::Above) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// images under a map

VEdge image_edge(const PiecewiseAffineMap& f, const VEdge& e) {
  const FlatSurface& s = *f.surface();
  const FieldElement half = s.field()->from_rational(Rational(1, 2));
  for (const auto& g : e.segs) {
    if (compare(g.t0, half) > 0 || compare(g.t1, half) < 0) continue;
    Vec2 m = g.p0 + ((half - g.t0) / (g.t1 - g.t0)) * (g.p1 - g.p0);
    SurfacePoint p{s.tri(g.tri).poly, m};
    auto pi = f.piece_at(p);
    check_internal(pi.has_value(), "edge midpoint outside every map piece");
    const MapPiece& pc = f.pieces()[*pi];
    SurfacePoint fm{pc.dst, pc.D * m + pc.t};
    Vec2 h = pc.D * e.hol();
    Trace back = s.trace_from_point(fm, Rational(-1, 2) * h, s.field()->one(), true);
    check_internal(back.end_corner >= 0 && back.t_end == s.field()->one(), "image of an edge is not a saddle connection");
    Vec2 hh = back.steps.back().T.inverse().linear(h);
    return make_vedge(s, saddle_from(s, back.end_corner, hh));
  }
  fail(ErrorKind::Internal, "edge has no midpoint");
}

Section image_section(const PiecewiseAffineMap& f, const Section& T) {
  std::vector<VEdge> es;
  es.reserve(T.size());
  for (const auto& e : T.edges()) es.push_back(image_edge(f, e));
  return Section::from_edges(T.surface(), std::move(es), false);
}

Section f_section(const AffineAutomorphism& f, const Section& T0) {
  if (compare(f.lambda(), f.lambda().field()->one()) <= 0)
    fail(ErrorKind::LambdaNotExpanding, "f-sections need a map expanding the horizontal direction");
  Section T = T0;
  for (int guard = 0; guard < 10000; ++guard) {
    Section fT = image_section(f.map(), T);
    if (section_leq(fT, T)) return T;
    T = section_max(T, fT);
  }
  fail(ErrorKind::Internal, "f-section iteration did not terminate");
}

Section annular_avoiding_f_section(const AffineAutomorphism& f, const Section& T0, int max_degree) {
  const FlatSurface& s = *f.surface();
  auto degree = [&](const VEdge& e) {
    auto R = is_veering_edge(s, e.fwd);
    check_internal(R.has_value(), "section edge is not veering");
    return R->degree;
  };
  Section T = f_section(f, T0);
  auto too_high = [&](const Section& X) {
    for (const auto& e : X.edges())
      if (degree(e) > max_degree) return true;
    return false;
  };
  if (!too_high(T)) return T;
  // descend through the cylinder pockets
  for (int guard = 0; guard < kFlipGuard && too_high(T); ++guard) {
    int pick = -1;
    for (int i = 0; i < T.size() && pick < 0; ++i)
      if (degree(T.edges()[i]) > max_degree && T.downward_flippable(i)) pick = i;
    if (pick < 0) {
      // flip the tallest downward-flippable edge to expose one
      FieldElement best;
      for (int i = 0; i < T.size(); ++i)
        if (T.downward_flippable(i) && (pick < 0 || compare(T.edges()[i].hol().y.abs(), best) > 0)) {
          pick = i;
          best = T.edges()[i].hol().y.abs();
        }
    }
    T = T.flip_down(pick);
  }
  // close up downward: the minimum of f^-i(T) is again an f-section and
  // consists of edges of the family, whose degrees are f-invariant
  AffineAutomorphism g = f.inverse();
  for (int guard = 0; guard < 10000; ++guard) {
    Section gT = image_section(g.map(), T);
    if (section_leq(T, gT)) break;
    T = section_min(T, gT);
  }
  check_internal(section_leq(image_section(f.map(), T), T), "annular avoiding section is not an f-section");
  return T;
}

// ---------------------------------------------------------------------------
// pockets

Pocket pocket(const SurfacePtr& s, const VEdge& sigma1, const VEdge& sigma2) {
  Order o = edge_order(sigma1, sigma2);
  if (o == Order::Disjoint || o == Order::Equal) fail(ErrorKind::NotCrossing, "pocket edges must cross");
  if (o == Order::Below) fail(ErrorKind::WrongOrder, "the first edge must lie above the second");
  Section P1 = t_minus(s, sigma1);
  Section P2 = t_plus(s, sigma2);
  std::vector<VEdge> topd, botd;
  for (const auto& e : P1.edges())
    if (!P2.contains(e)) topd.push_back(e);
  for (const auto& e : P2.edges())
    if (!P1.contains(e)) botd.push_back(e);
  // connected component of the crossing graph through sigma1
  std::vector<char> in_top(topd.size(), 0), in_bot(botd.size(), 0);
  std::deque<std::pair<bool, int>> q;
  for (std::size_t i = 0; i < topd.size(); ++i)
    if (same_edge(topd[i], sigma1)) {
      in_top[i] = 1;
      q.push_back({true, static_cast<int>(i)});
    }
  check_internal(!q.empty(), "pocket top lost its edge");
  while (!q.empty()) {
    auto [top, i] = q.front();
    q.pop_front();
    if (top) {
      for (std::size_t j = 0; j < botd.size(); ++j)
        if (!in_bot[j] && edges_cross(topd[i], botd[j])) {
          in_bot[j] = 1;
          q.push_back({false, static_cast<int>(j)});
        }
    } else {
      for (std::size_t j = 0; j < topd.size(); ++j)
        if (!in_top[j] && edges_cross(botd[i], topd[j])) {
          in_top[j] = 1;
          q.push_back({true, static_cast<int>(j)});
        }
    }
  }
  Pocket P;
  for (std::size_t i = 0; i < topd.size(); ++i)
    if (in_top[i]) P.top.push_back(topd[i]);
  for (std::size_t i = 0; i < botd.size(); ++i)
    if (in_bot[i]) P.bottom.push_back(botd[i]);
  for (const auto& a : P.top)
    for (const auto& b : P.bottom) P.intersection += intersection_number(a, b);
  // tetrahedra of the pocket: upward flips from P- to P+ inside its base
  Section T = P2;
  for (int guard = 0; guard < kFlipGuard; ++guard) {
    int pick = -1;
    for (int i = 0; i < T.size() && pick < 0; ++i) {
      const VEdge& e = T.edges()[i];
      if (!T.upward_flippable(i)) continue;
      for (const auto& x : P.top)
        if (edge_order(e, x) == Order::Below) {
          pick = i;
          break;
        }
    }
    if (pick < 0) break;
    T = T.flip_up(pick);
    ++P.flips;
  }
  for (const auto& x : P.top) check_internal(T.contains(x), "pocket sweep did not reach the top");
  return P;
}

// ---------------------------------------------------------------------------
// layered triangulation of the mapping torus

namespace {

struct DartKey {
  int corner;
  Vec2 hol;
};
bool operator<(const DartKey& a, const DartKey& b) {
  if (a.corner != b.corner) return a.corner < b.corner;
  return key_less(a.hol, b.hol);
}

DartKey dart_key(const SaddleConnection& c) { return {c.start_corner, c.hol}; }

/// A face as darts in canonical rotation (smallest first).
struct FaceKey {
  std::array<DartKey, 3> d;
  bool operator<(const FaceKey& o) const {
    for (int i = 0; i < 3; ++i) {
      if (d[i] < o.d[i]) return true;
      if (o.d[i] < d[i]) return false;
    }
    return false;
  }
};

/// Canonical key of darts (x0, x1, x2) and the rotation r with key.d[j] = x[(j + r) % 3].
std::pair<FaceKey, int> face_key(const std::array<DartKey, 3>& x) {
  int r = 0;
  for (int i = 1; i < 3; ++i)
    if (x[i] < x[r]) r = i;
  return {FaceKey{{x[r], x[(r + 1) % 3], x[(r + 2) % 3]}}, r};
}

struct FaceEnd {
  int tet = -1;  // -1: the face lies on the bottom boundary f(T)
  int face = -1;
  std::array<int, 3> vmap{};  // canonical corner j -> tetrahedron vertex
};

}  // namespace

Layering mapping_torus_layering(const AffineAutomorphism& f, const Section& T) {
  const FlatSurface& s = *f.surface();
  Layering L;
  Section cur = image_section(f.map(), T);
  if (!section_leq(cur, T)) fail(ErrorKind::DegenerateInput, "T is not an f-section");
  std::map<FaceKey, FaceEnd> open;     // faces of the current section, with their creator
  std::map<FaceKey, FaceEnd> consumer;  // bottom-boundary faces, with the tetrahedron that consumed them
  auto darts_of = [](const Section& X, const Face& F) {
    return std::array<DartKey, 3>{dart_key(X.dart(F.darts[0])), dart_key(X.dart(F.darts[1])),
                                  dart_key(X.dart(F.darts[2]))};
  };
  for (const auto& F : cur.faces()) open[face_key(darts_of(cur, F)).first] = FaceEnd{};
  struct Glue {
    FaceEnd a, b;
  };
  std::vector<Glue> glues;
  auto attach = [&](int tet, int face, const std::array<DartKey, 3>& x, const std::array<int, 3>& verts, bool bottom) {
    // verts[j] is the tetrahedron vertex at the start of x[j]
    auto [key, r] = face_key(x);
    FaceEnd me{tet, face, {verts[r % 3], verts[(r + 1) % 3], verts[(r + 2) % 3]}};
    if (bottom) {
      auto it = open.find(key);
      check_internal(it != open.end(), "layering consumed a face that is not present");
      if (it->second.tet < 0)
        consumer[key] = me;
      else
        glues.push_back({it->second, me});
      open.erase(it);
    } else {
      open[key] = me;
    }
  };
  for (int guard = 0; !(cur == T); ++guard) {
    check_internal(guard < kFlipGuard, "layering did not reach T");
    int pick = -1;
    for (int i = 0; i < cur.size() && pick < 0; ++i) {
      if (T.contains(cur.edges()[i]) || !cur.upward_flippable(i)) continue;
      for (const auto& x : T.edges())
        if (edge_order(cur.edges()[i], x) == Order::Below) {
          pick = i;
          break;
        }
    }
    check_internal(pick >= 0, "layering stalled");
    int e = pick;
    int a = cur.next_dart(2 * e), b = cur.next_dart(a);
    int c = cur.next_dart(2 * e + 1), d = cur.next_dart(c);
    VEdge ne = cur.flipped_edge(e);
    // points: u -> v along the bottom edge, w1 left of it, w2 right
    enum { U, V, W1, W2 };
    std::array<int, 4> label{};
    label[U] = 0;
    label[V] = 1;
    Vec2 h21 = cur.dart(d).hol + cur.dart(a).hol;  // w2 -> w1
    bool w2_first = h21.x.sign() > 0;
    label[W2] = w2_first ? 2 : 3;
    label[W1] = w2_first ? 3 : 2;
    int tet = static_cast<int>(L.tets.size());
    Tetrahedron th;
    th.bottom = cur.edges()[e];
    th.top = ne;
    L.tets.push_back(th);
    const SaddleConnection& n21 = w2_first ? ne.fwd : ne.rev;
    const SaddleConnection& n12 = w2_first ? ne.rev : ne.fwd;
    DartKey ke = dart_key(cur.dart(2 * e)), kr = dart_key(cur.dart(2 * e + 1));
    DartKey ka = dart_key(cur.dart(a)), kb = dart_key(cur.dart(b)), kc = dart_key(cur.dart(c)),
            kd = dart_key(cur.dart(d));
    // bottom faces (u, v, w1) and (v, u, w2)
    attach(tet, label[W2], {ke, ka, kb}, {label[U], label[V], label[W1]}, true);
    attach(tet, label[W1], {kr, kc, kd}, {label[V], label[U], label[W2]}, true);
    // top faces (w2, w1, u) and (w1, w2, v)
    attach(tet, label[V], {dart_key(n21), kb, kc}, {label[W2], label[W1], label[U]}, false);
    attach(tet, label[U], {dart_key(n12), kd, ka}, {label[W1], label[W2], label[V]}, false);
    cur = cur.flip_up(e);
  }
  // identify the top boundary T with the bottom boundary f(T)
  std::map<DartKey, DartKey> fdart;
  for (const auto& e : T.edges()) {
    VEdge im = image_edge(f.map(), e);
    fdart[dart_key(e.fwd)] = dart_key(im.fwd);
    fdart[dart_key(e.rev)] = dart_key(im.rev);
  }
  for (const auto& [key, end] : open) {
    if (end.tet < 0) continue;  // reached from below through an untouched face
    // follow f until a consumed bottom face; corners are carried along
    FaceKey k = key;
    std::array<int, 3> carry = {0, 1, 2};  // canonical corner of `key` -> corner of k
    for (int guard = 0;; ++guard) {
      check_internal(guard < 10000, "boundary identification loops");
      std::array<DartKey, 3> img{fdart.at(k.d[0]), fdart.at(k.d[1]), fdart.at(k.d[2])};
      auto [ik, r] = face_key(img);
      // corner j of k becomes corner (j - r) mod 3 of ik
      for (auto& x : carry) x = (x - r + 3) % 3;
      auto it = consumer.find(ik);
      if (it != consumer.end()) {
        FaceEnd dst = it->second;
        FaceEnd src = end;
        std::array<int, 3> vm{};
        for (int j = 0; j < 3; ++j) vm[carry[j]] = src.vmap[j];
        src.vmap = vm;
        glues.push_back({src, dst});
        break;
      }
      k = ik;
    }
  }
  for (const auto& g : glues) {
    auto link = [&](const FaceEnd& x, const FaceEnd& y) {
      Tetrahedron& t = L.tets[x.tet];
      t.partner_tet[x.face] = y.tet;
      t.partner_face[x.face] = y.face;
      auto& p = t.perm[x.face];
      for (int j = 0; j < 3; ++j) p[x.vmap[j]] = y.vmap[j];
      p[x.face] = y.face;
    };
    link(g.a, g.b);
    link(g.b, g.a);
  }
  (void)s;
  return L;
}

bool Layering::closed() const {
  std::set<std::pair<int, int>> seen;
  for (std::size_t t = 0; t < tets.size(); ++t)
    for (int f = 0; f < 4; ++f) {
      int pt = tets[t].partner_tet[f], pf = tets[t].partner_face[f];
      if (pt < 0 || pt >= static_cast<int>(tets.size())) return false;
      if (tets[pt].partner_tet[pf] != static_cast<int>(t) || tets[pt].partner_face[pf] != f) return false;
      if (!seen.insert({pt, pf}).second) return false;
      const auto& p = tets[t].perm[f];
      const auto& q = tets[pt].perm[pf];
      for (int v = 0; v < 4; ++v)
        if (q[p[v]] != v) return false;
    }
  return seen.size() == 4 * tets.size();
}

std::string Layering::gluing_table() const {
  std::ostringstream os;
  for (std::size_t t = 0; t < tets.size(); ++t) {
    os << t;
    for (int f = 0; f < 4; ++f) {
      os << " | " << tets[t].partner_tet[f] << ":" << tets[t].partner_face[f] << " (";
      for (int v = 0; v < 4; ++v) os << tets[t].perm[f][v];
      os << ")";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace veerfix
