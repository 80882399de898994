#include "veerfix/corpus.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

namespace veerfix {

SquareTiledPattern l_shaped_pattern() { return {{1, 0, 2}, {2, 1, 0}}; }
SquareTiledPattern one_square_pattern() { return {{0}, {0}}; }

std::string data_dir() {
#ifdef VEERFIX_DATA_DIR
  return VEERFIX_DATA_DIR;
#else
  return "data";
#endif
}

namespace {

bool is_permutation(const std::vector<int>& p) {
  std::vector<bool> seen(p.size(), false);
  for (int x : p) {
    if (x < 0 || x >= static_cast<int>(p.size()) || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

long cycle_lcm(const std::vector<int>& p) {
  long m = 1;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    long len = 0;
    for (int j = static_cast<int>(i); !seen[j]; j = p[j]) {
      seen[j] = true;
      ++len;
    }
    m = std::lcm(m, len);
  }
  return m;
}

int find(std::vector<int>& uf, int x) {
  while (uf[x] != x) x = uf[x] = uf[uf[x]];
  return x;
}

PiecewiseAffineMap map_power(const PiecewiseAffineMap& m, int k) {
  if (k == 0) fail(ErrorKind::NotHyperbolic, "zero twist power");
  PiecewiseAffineMap base = k > 0 ? m : m.inverse();
  PiecewiseAffineMap r = base;
  for (int i = 1; i < std::abs(k); ++i) r = compose(base, r);
  return r;
}

PiecewiseAffineMap identity_map(const SurfacePtr& s) {
  const FieldPtr& K = s->field();
  std::vector<MapPiece> pieces;
  for (int p = 0; p < s->num_polygons(); ++p)
    pieces.push_back({p, s->polygon(p), Mat2::identity(K), {K->zero(), K->zero()}, p});
  return PiecewiseAffineMap(s, std::move(pieces));
}

// Corner of polygon 0's first triangle at the polygon vertex `pv`.
int square_corner(const FlatSurface& s, int pv) {
  int t = s.poly_triangles(0).front();
  for (int i = 0; i < 3; ++i)
    if (s.tri(t).pv[i] == pv) return 3 * t + i;
  fail(ErrorKind::Internal, "square corner not found");
}

}  // namespace

SurfacePtr origami_surface(const SquareTiledPattern& p) {
  const int n = p.size();
  if (n == 0 || static_cast<int>(p.v.size()) != n || !is_permutation(p.h) || !is_permutation(p.v))
    fail(ErrorKind::DegenerateInput, "h and v must be permutations of the same size");
  {
    std::vector<bool> seen(n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    int count = 1;
    std::vector<int> hi(n), vi(n);
    for (int i = 0; i < n; ++i) hi[p.h[i]] = vi[p.v[i]] = i;
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int j : {p.h[i], p.v[i], hi[i], vi[i]})
        if (!seen[j]) {
          seen[j] = true;
          ++count;
          stack.push_back(j);
        }
    }
    if (count != n) fail(ErrorKind::NotFilling, "squares do not form a connected surface");
  }
  FieldPtr q = RealNumberField::rationals();
  auto r = [&](long x) { return q->from_rational(x); };
  SurfaceSpec spec;
  spec.field = q;
  for (int i = 0; i < n; ++i)
    spec.polygons.push_back({"S" + std::to_string(i + 1), {{r(0), r(0)}, {r(1), r(0)}, {r(1), r(1)}, {r(0), r(1)}}});
  for (int i = 0; i < n; ++i) {
    spec.gluings.push_back({i, 1, p.h[i], 3, false});
    spec.gluings.push_back({i, 2, p.v[i], 0, false});
  }
  // corners 4i + k, k = 0 bottom left, 1 bottom right, 2 top right, 3 top left
  std::vector<int> uf(4 * n);
  std::iota(uf.begin(), uf.end(), 0);
  auto join = [&](int a, int b) { uf[find(uf, a)] = find(uf, b); };
  for (int i = 0; i < n; ++i) {
    join(4 * i + 1, 4 * p.h[i] + 0);
    join(4 * i + 2, 4 * p.h[i] + 3);
    join(4 * i + 3, 4 * p.v[i] + 0);
    join(4 * i + 2, 4 * p.v[i] + 1);
  }
  std::map<int, std::vector<int>> classes;
  for (int c = 0; c < 4 * n; ++c) classes[find(uf, c)].push_back(c);
  for (const auto& [root, cs] : classes)
    if (cs.size() == 4) spec.marks.emplace_back(cs.front() / 4, cs.front() % 4);
  return FlatSurface::validate(spec);
}

std::pair<SurfacePtr, AffineAutomorphism> thurston_construction(const SquareTiledPattern& p, int a, int b) {
  SurfacePtr s = origami_surface(p);
  const FieldPtr& q = s->field();
  auto r = [&](long x) { return q->from_rational(x); };
  const long mh = cycle_lcm(p.h), mv = cycle_lcm(p.v);
  const long A = 1 + static_cast<long>(a) * b * mh * mv, B = a * mh, C = b * mv, D = 1;
  EigenFrame ef = eigen_frame(A, B, C, D);
  // the horizontal multitwist fixes the rightward prong at the bottom-left
  // corner of square 1, the vertical one the upward prong at its bottom-right
  int ch = square_corner(*s, 0), cv = square_corner(*s, 1);
  check_internal(s->corner_out(ch) == Vec2{r(1), r(0)} && s->corner_out(cv) == Vec2{r(0), r(1)},
                 "unexpected square triangulation");
  PiecewiseAffineMap th = affine_map_from_anchor(s, Mat2{r(1), r(mh), r(0), r(1)}, ch, ch);
  PiecewiseAffineMap tv = affine_map_from_anchor(s, Mat2{r(1), r(0), r(mv), r(1)}, cv, cv);
  th.validate();
  tv.validate();
  PiecewiseAffineMap g = compose(map_power(th, a), map_power(tv, b));
  SurfacePtr s2 = change_coordinates(*s, ef.to_eigen);
  return {s2, AffineAutomorphism::validate(change_coordinates(g, s2, ef.to_eigen))};
}

PiecewiseAffineMap affine_with_derivative(const SurfacePtr& s, const Mat2& D) {
  if (D.det() != s->field()->one()) fail(ErrorKind::NotBijective, "derivative " + D.to_string() + " does not preserve area");
  const int src = 0;
  const int angle = s->cone_points()[s->corner_vertex(src)].angle_pi;
  for (const auto& cp : s->cone_points()) {
    if (cp.angle_pi != angle) continue;
    for (int c : s->vertex_corners(cp.id)) {
      try {
        PiecewiseAffineMap m = affine_map_from_anchor(s, D, src, c);
        m.validate();
        return m;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Discontinuous && e.kind() != ErrorKind::NotBijective) throw;
      }
    }
  }
  fail(ErrorKind::NotBijective, "no affine automorphism with derivative " + D.to_string());
}

// ---------------------------------------------------------------------------
// cylinders and twists

Cylinder cylinder_with_holonomy(const FlatSurface& s, const Vec2& hol) {
  std::vector<Cylinder> found;
  for (auto& c : cylinders_in_direction(s, hol, s.field()->one()))
    if (c.hol == hol) found.push_back(std::move(c));
  if (found.size() != 1)
    fail(ErrorKind::NotCylinder, std::to_string(found.size()) + " cylinders with core holonomy " + hol.to_string());
  return found.front();
}

PiecewiseAffineMap cylinder_twist(const SurfacePtr& sp, const Cylinder& c, int n) {
  const FlatSurface& s = *sp;
  const FieldPtr& K = s.field();
  bool genuine = false;
  for (const auto& d : cylinders_in_direction(s, c.hol, K->one()))
    if (d.hol == c.hol && d.height == c.height && d.base_corner == c.base_corner) genuine = true;
  if (!genuine) fail(ErrorKind::NotCylinder, "not a maximal cylinder of the surface");
  if (n == 0) return identity_map(sp);

  const Vec2 u = c.hol, w = c.transversal();
  const Vec2 O = s.corner_pos(c.base_corner);
  const FieldElement cw = cross(u, w);
  // X - O = a u + b w  ->  X - O + n b u
  const FieldElement nc = K->from_rational(n) / cw;
  const Mat2 M{K->one() - nc * u.x * u.y, nc * u.x * u.x, -nc * u.y * u.y, K->one() + nc * u.x * u.y};
  const Mat2 Mi = M.inverse();
  Polygon P{O, O + u, O + u + w, O + w};
  DevelopResult dev = s.develop_region(P, c.base_corner / 3, Xform::identity(K));
  check_internal(!dev.hit_vertex, "cylinder interior contains a cone point");
  // the line a + n b = k passes through O + k u and O + (k - n) u + w
  auto line = [&](long k) { return std::make_pair(O + K->from_rational(k) * u, O + K->from_rational(k - n) * u + w); };
  const long kmin = std::min(0, n), kmax = std::max(1, n + 1);
  std::vector<MapPiece> pieces;
  for (const auto& Ri : dev.pieces) {
    for (long k = kmin; k < kmax; ++k) {
      auto [p0, p1] = line(k);
      auto [q0, q1] = line(k + 1);
      Polygon strip = clip_halfplane(clip_halfplane(Ri.region, p1, p0), q0, q1);
      if (strip.size() < 3 || signed_area2(strip).sign() <= 0) continue;
      for (const auto& Rj : dev.pieces) {
        // points X of the strip whose image M (X - O) + O - k u lies in Rj
        Polygon pre = transform(Rj.region, Mi, Mi * (K->from_rational(k) * u - O) + O);
        Polygon Q = clip_convex(strip, pre);
        if (Q.size() < 3 || signed_area2(Q).sign() <= 0) continue;
        const Vec2& ai = Ri.T.t;
        const Vec2& aj = Rj.T.t;
        Vec2 t = M * (ai - O) + O - K->from_rational(k) * u - aj;
        pieces.push_back({s.tri(Ri.tri).poly, transform(Q, Ri.T.inverse()), M, t, s.tri(Rj.tri).poly});
      }
    }
  }
  // identity on the complement
  std::vector<std::vector<Polygon>> rest(s.num_polygons());
  for (int p = 0; p < s.num_polygons(); ++p) rest[p] = {s.polygon(p)};
  for (const auto& R : dev.pieces) {
    int p = s.tri(R.tri).poly;
    Polygon C = transform(R.region, R.T.inverse());
    std::vector<Polygon> next;
    for (const auto& r : rest[p])
      for (auto& d : convex_difference(r, C)) next.push_back(std::move(d));
    rest[p] = std::move(next);
  }
  for (int p = 0; p < s.num_polygons(); ++p)
    for (auto& r : rest[p]) pieces.push_back({p, std::move(r), Mat2::identity(K), {K->zero(), K->zero()}, p});
  PiecewiseAffineMap m(sp, std::move(pieces));
  m.validate();
  return m;
}

PiecewiseAffineMap twist_composite(const AffineAutomorphism& f, const Cylinder& c, int n) {
  if (n == 0) return f.map();
  PiecewiseAffineMap h = compose(f.map(), cylinder_twist(f.surface(), c, n));
  h.validate();
  return h;
}

int core_self_intersection(const AffineAutomorphism& f, const Cylinder& c) {
  const FlatSurface& s = *f.surface();
  SurfacePoint x = core_point(s, c);
  auto a = closed_geodesic(s, x, c.hol);
  auto b = closed_geodesic(s, f.apply(x), f.derivative() * c.hol);
  return closed_crossing_count(a, b);
}

// ---------------------------------------------------------------------------
// the nonoverlapped example

NonoverlappedExample build_nonoverlapped_example() {
  SquareTiledPattern p = l_shaped_pattern();
  SurfacePtr s = origami_surface(p);
  const FieldPtr& q = s->field();
  auto r = [&](long x) { return q->from_rational(x); };
  // squared horizontal multitwist (cylinders of circumference 2 and 1)
  int ch = square_corner(*s, 0);
  PiecewiseAffineMap th2 = affine_map_from_anchor(s, Mat2{r(1), r(4), r(0), r(1)}, ch, ch);
  PiecewiseAffineMap rot = affine_with_derivative(s, Mat2{r(0), r(-1), r(1), r(0)});
  PiecewiseAffineMap g = compose(rot, th2);
  EigenFrame ef = eigen_frame(0, -1, 1, 4);
  SurfacePtr s2 = change_coordinates(*s, ef.to_eigen);
  AffineAutomorphism f = AffineAutomorphism::validate(change_coordinates(g, s2, ef.to_eigen));
  // alpha: the horizontal cylinder of circumference 1 (the top square)
  Cylinder alpha = cylinder_with_holonomy(*s2, ef.to_eigen * Vec2{s2->field()->one(), s2->field()->zero()});
  check_internal(core_self_intersection(f, alpha) == 0, "nonoverlapped example: alpha meets its image");
  return {s2, f, alpha};
}

NonoverlappedExample nonoverlapped_example(const std::string& dir_in) {
  const std::string dir = dir_in.empty() ? data_dir() + "/nonoverlapped" : dir_in;
  try {
    Document d = read_document(dir + "/example.txt");
    if (!d.map || !d.lambda) fail(ErrorKind::CorruptDataFile, "example has no map");
    AffineAutomorphism f = AffineAutomorphism::validate(*d.map);
    if (f.lambda() != *d.lambda) fail(ErrorKind::CorruptDataFile, "recorded lambda disagrees with the map");
    std::ifstream in(dir + "/alpha.txt");
    if (!in) fail(ErrorKind::CorruptDataFile, "cannot open " + dir + "/alpha.txt");
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      auto eq = line.find('=');
      if (eq == std::string::npos) fail(ErrorKind::CorruptDataFile, "bad line in alpha.txt: " + line);
      auto trim = [](std::string x) {
        x.erase(0, x.find_first_not_of(" \t"));
        x.erase(x.find_last_not_of(" \t\r") + 1);
        return x;
      };
      kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    if (!kv.count("hol_x") || !kv.count("hol_y")) fail(ErrorKind::CorruptDataFile, "alpha.txt lacks hol_x / hol_y");
    const FieldPtr& K = d.surface->field();
    Cylinder alpha = cylinder_with_holonomy(*d.surface, {K->parse(kv["hol_x"]), K->parse(kv["hol_y"])});
    if (core_self_intersection(f, alpha) != 0) fail(ErrorKind::CorruptDataFile, "alpha meets its image");
    return {d.surface, f, alpha};
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::CorruptDataFile) throw;
    fail(ErrorKind::CorruptDataFile, std::string(e.what()));
  }
}

std::vector<std::pair<std::string, std::string>> corpus_files() {
  std::vector<std::pair<std::string, std::string>> out;
  auto add = [&](const std::string& path, const AffineAutomorphism& f) {
    FieldElement lam = f.lambda();
    out.emplace_back(path, write_document(*f.surface(), &f.map(), &lam));
  };
  auto [ts, cat] = torus_from_matrix(2, 1, 1, 1);
  add("torus/cat.txt", cat);
  add("torus/cat_squared.txt", cat.power(2));
  auto [ls, lf] = thurston_construction(l_shaped_pattern(), 1, 1);
  add("genus2/l_shape.txt", lf);
  NonoverlappedExample ex = build_nonoverlapped_example();
  add("nonoverlapped/example.txt", ex.f);
  out.emplace_back("nonoverlapped/alpha.txt", "# core holonomy of the cylinder alpha, disjoint from its image\n"
                                              "hol_x = " + ex.alpha.hol.x.to_string() + "\n" +
                                              "hol_y = " + ex.alpha.hol.y.to_string() + "\n");
  return out;
}

}  // namespace veerfix
