#include <deque>
#include <map>
#include <set>

#include "veerfix/flatsurf.hpp"

namespace veerfix {

namespace {

/// Every (polygon, coordinates) presentation of a surface point.
std::vector<SurfacePoint> polygon_reps(const FlatSurface& s, const SurfacePoint& pt) {
  int idx = -1;
  Where w = s.locate_in_polygon(pt.poly, pt.p, &idx);
  switch (w) {
    case Where::Outside:
      fail(ErrorKind::Internal, "point outside its polygon");
    case Where::Interior:
      return {pt};
    case Where::Edge: {
      const auto& g = s.glue(pt.poly, idx);
      return {pt, {g.poly, g.to(pt.p)}};
    }
    case Where::Vertex: {
      std::vector<SurfacePoint> out;
      int cls = s.vertex_class(pt.poly, idx);
      for (int p = 0; p < s.num_polygons(); ++p)
        for (std::size_t v = 0; v < s.polygon(p).size(); ++v)
          if (s.vertex_class(p, static_cast<int>(v)) == cls) out.push_back({p, s.polygon(p)[v]});
      return out;
    }
  }
  return {};
}

BBox point_box(const Vec2& v) { return bbox(Polygon{v}); }

}  // namespace

PiecewiseAffineMap::PiecewiseAffineMap(SurfacePtr s, std::vector<MapPiece> pieces)
    : surface_(std::move(s)), pieces_(std::move(pieces)) {
  by_src_.assign(surface_->num_polygons(), {});
  boxes_.reserve(pieces_.size());
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& pc = pieces_[i];
    if (pc.src < 0 || pc.src >= surface_->num_polygons() || pc.dst < 0 || pc.dst >= surface_->num_polygons())
      fail(ErrorKind::Parse, "map piece refers to a nonexistent polygon");
    by_src_[pc.src].push_back(static_cast<int>(i));
    boxes_.push_back(bbox(pc.region));
  }
}

std::optional<int> PiecewiseAffineMap::piece_at(const SurfacePoint& p) const {
  BBox b = point_box(p.p);
  for (int i : by_src_[p.poly])
    if (boxes_[i].overlaps(b) && in_closed(pieces_[i].region, p.p)) return i;
  return std::nullopt;
}

SurfacePoint PiecewiseAffineMap::apply(const SurfacePoint& p) const {
  for (const auto& r : polygon_reps(*surface_, p)) {
    auto i = piece_at(r);
    if (i) {
      const auto& pc = pieces_[*i];
      return {pc.dst, pc.D * r.p + pc.t};
    }
  }
  fail(ErrorKind::NotBijective, "no map piece contains " + p.p.to_string());
}

void PiecewiseAffineMap::validate() const {
  const FlatSurface& s = *surface_;
  const int np = s.num_polygons();
  std::vector<FieldElement> src_area(np, s.field()->zero()), dst_area(np, s.field()->zero());
  std::vector<std::vector<std::pair<int, Polygon>>> images(np);
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& pc = pieces_[i];
    if (!is_strictly_convex(pc.region)) fail(ErrorKind::NotBijective, "map piece " + std::to_string(i) + " is degenerate");
    if (pc.D.det() != s.field()->one())
      fail(ErrorKind::NotBijective, "map piece " + std::to_string(i) + " does not preserve area");
    for (const auto& v : pc.region)
      if (!in_closed(s.polygon(pc.src), v))
        fail(ErrorKind::NotBijective, "map piece " + std::to_string(i) + " leaves its source polygon");
    Polygon img = transform(pc.region, pc.D, pc.t);
    for (const auto& v : img)
      if (!in_closed(s.polygon(pc.dst), v))
        fail(ErrorKind::NotBijective, "image of map piece " + std::to_string(i) + " leaves its target polygon");
    src_area[pc.src] += signed_area2(pc.region);
    dst_area[pc.dst] += signed_area2(img);
    images[pc.dst].emplace_back(static_cast<int>(i), std::move(img));
  }
  for (int p = 0; p < np; ++p) {
    FieldElement a = signed_area2(s.polygon(p));
    if (src_area[p] != a) fail(ErrorKind::NotBijective, "pieces do not tile polygon " + s.polygon_name(p));
    if (dst_area[p] != a) fail(ErrorKind::NotBijective, "images do not tile polygon " + s.polygon_name(p));
  }
  // disjoint interiors; with equal total area this makes both tilings exact
  auto check_disjoint = [&](const std::vector<std::pair<int, Polygon>>& polys, const char* what) {
    std::vector<std::pair<BBox, int>> boxes;
    for (std::size_t k = 0; k < polys.size(); ++k) boxes.emplace_back(bbox(polys[k].second), static_cast<int>(k));
    std::sort(boxes.begin(), boxes.end(), [](const auto& a, const auto& b) { return a.first.x0 < b.first.x0; });
    for (std::size_t a = 0; a < boxes.size(); ++a)
      for (std::size_t b = a + 1; b < boxes.size() && boxes[b].first.x0 <= boxes[a].first.x1; ++b) {
        if (!boxes[a].first.overlaps(boxes[b].first)) continue;
        if (!clip_convex(polys[boxes[a].second].second, polys[boxes[b].second].second).empty())
          fail(ErrorKind::NotBijective, std::string(what) + " overlap");
      }
  };
  for (int p = 0; p < np; ++p) {
    std::vector<std::pair<int, Polygon>> src;
    for (int i : by_src_[p]) src.emplace_back(i, pieces_[i].region);
    check_disjoint(src, "map pieces");
    check_disjoint(images[p], "piece images");
  }
  // continuity at every piece vertex, across pieces and gluings
  std::map<PointKey, PointKey> image_of;
  for (const auto& pc : pieces_)
    for (const auto& v : pc.region) {
      PointKey key = s.canonical({pc.src, v});
      if (image_of.count(key)) continue;
      std::optional<PointKey> img;
      for (const auto& r : polygon_reps(s, {pc.src, v})) {
        BBox b = point_box(r.p);
        for (int i : by_src_[r.poly]) {
          if (!boxes_[i].overlaps(b) || !in_closed(pieces_[i].region, r.p)) continue;
          PointKey k = s.canonical({pieces_[i].dst, pieces_[i].D * r.p + pieces_[i].t});
          if (!img)
            img = k;
          else if (!(*img == k))
            fail(ErrorKind::Discontinuous, "map is discontinuous at " + v.to_string() + " in " + s.polygon_name(pc.src));
        }
      }
      image_of.emplace(key, *img);
    }
}

std::vector<int> PiecewiseAffineMap::vertex_permutation() const {
  const FlatSurface& s = *surface_;
  std::vector<int> perm(s.num_vertices(), -1);
  for (int p = 0; p < s.num_polygons(); ++p)
    for (std::size_t v = 0; v < s.polygon(p).size(); ++v) {
      int cls = s.vertex_class(p, static_cast<int>(v));
      if (perm[cls] >= 0) continue;
      PointKey k = apply_key({p, s.polygon(p)[v]});
      if (k.vertex < 0) fail(ErrorKind::Discontinuous, "a cone point maps to a regular point");
      perm[cls] = k.vertex;
    }
  std::vector<int> seen(perm.size(), 0);
  for (int x : perm)
    if (seen[x]++) fail(ErrorKind::NotBijective, "vertex map is not a permutation");
  return perm;
}

bool PiecewiseAffineMap::is_identity() const {
  const FieldPtr& k = surface_->field();
  Mat2 I = Mat2::identity(k);
  for (const auto& pc : pieces_) {
    if (!(pc.D == I)) return false;
    Vec2 c{k->zero(), k->zero()};
    for (const auto& v : pc.region) c = c + v;
    c = Rational(1, static_cast<long>(pc.region.size())) * c;
    if (!(surface_->canonical({pc.src, c}) == surface_->canonical({pc.dst, c + pc.t}))) return false;
  }
  return true;
}

bool PiecewiseAffineMap::has_constant_derivative() const {
  for (const auto& pc : pieces_)
    if (!(pc.D == pieces_.front().D)) return false;
  return true;
}

PiecewiseAffineMap PiecewiseAffineMap::inverse() const {
  std::vector<MapPiece> out;
  out.reserve(pieces_.size());
  for (const auto& pc : pieces_) {
    Mat2 Di = pc.D.inverse();
    out.push_back({pc.dst, transform(pc.region, pc.D, pc.t), Di, -(Di * pc.t), pc.src});
  }
  return PiecewiseAffineMap(surface_, std::move(out));
}

PiecewiseAffineMap compose(const PiecewiseAffineMap& f, const PiecewiseAffineMap& g) {
  if (f.surface().get() != g.surface().get() && f.surface()->field().get() != g.surface()->field().get())
    fail(ErrorKind::FieldMismatch, "maps live on different surfaces");
  std::vector<MapPiece> out;
  std::vector<BBox> fboxes;
  for (const auto& fp : f.pieces()) fboxes.push_back(bbox(fp.region));
  for (const auto& gp : g.pieces()) {
    Polygon img = transform(gp.region, gp.D, gp.t);
    BBox ib = bbox(img);
    Mat2 gi = gp.D.inverse();
    Vec2 gti = -(gi * gp.t);
    for (int j : f.pieces_of(gp.dst)) {
      if (!fboxes[j].overlaps(ib)) continue;
      const auto& fp = f.pieces()[j];
      Polygon inter = clip_convex(img, fp.region);
      if (inter.empty()) continue;
      out.push_back({gp.src, transform(inter, gi, gti), fp.D * gp.D, fp.D * gp.t + fp.t, fp.dst});
    }
  }
  return PiecewiseAffineMap(g.surface(), std::move(out));
}

AffineAutomorphism AffineAutomorphism::validate(const PiecewiseAffineMap& m) {
  if (m.surface()->has_halfturns())
    fail(ErrorKind::Unsupported, "affine automorphisms of half-translation surfaces are not supported");
  if (m.pieces().empty()) fail(ErrorKind::NotBijective, "map has no pieces");
  const FieldElement lambda = m.pieces().front().D.a;
  for (const auto& pc : m.pieces()) {
    if (!pc.D.b.is_zero() || !pc.D.c.is_zero() || pc.D.a != lambda || (pc.D.a * pc.D.d) != lambda.field()->one())
      fail(ErrorKind::NotConstantDerivative, "piece derivative " + pc.D.to_string() + " is not diag(lambda, 1/lambda)");
  }
  if (compare(lambda, lambda.field()->one()) <= 0)
    fail(ErrorKind::LambdaNotExpanding, "lambda = " + lambda.to_string() + " is not greater than 1");
  m.validate();
  AffineAutomorphism f;
  f.map_ = m;
  f.lambda_ = lambda;
  f.perm_ = m.vertex_permutation();
  for (std::size_t v = 0; v < f.perm_.size(); ++v)
    if (m.surface()->cone_points()[v].angle_pi != m.surface()->cone_points()[f.perm_[v]].angle_pi)
      fail(ErrorKind::NotBijective, "vertex permutation does not preserve cone angles");
  return f;
}

AffineAutomorphism AffineAutomorphism::inverse() const {
  // the inverse has derivative diag(1/λ, λ); conjugating by the quarter
  // turn is not an option in the fixed chart, so callers get the raw inverse
  // wrapped with λ' = 1/λ
  AffineAutomorphism g;
  g.map_ = map_.inverse();
  g.lambda_ = lambda_.inverse();
  g.perm_.assign(perm_.size(), 0);
  for (std::size_t v = 0; v < perm_.size(); ++v) g.perm_[perm_[v]] = static_cast<int>(v);
  return g;
}

AffineAutomorphism AffineAutomorphism::power(int n) const {
  if (n < 1) fail(ErrorKind::DegenerateInput, "power requires n >= 1");
  AffineAutomorphism result = *this, base = *this;
  bool have = false;
  while (n > 0) {
    if (n & 1) {
      if (!have) {
        result = base;
        have = true;
      } else {
        result.map_ = compose(base.map_, result.map_);
        result.lambda_ = result.lambda_ * base.lambda_;
        std::vector<int> p(perm_.size());
        for (std::size_t v = 0; v < p.size(); ++v) p[v] = base.perm_[result.perm_[v]];
        result.perm_ = p;
      }
    }
    n >>= 1;
    if (n > 0) {
      base.map_ = compose(base.map_, base.map_);
      base.lambda_ = base.lambda_ * base.lambda_;
      std::vector<int> p(perm_.size());
      for (std::size_t v = 0; v < p.size(); ++v) p[v] = base.perm_[base.perm_[v]];
      base.perm_ = p;
    }
  }
  return result;
}

PiecewiseAffineMap affine_map_from_anchor(const SurfacePtr& sp, const Mat2& D, int src_corner, int dst_corner) {
  const FlatSurface& s = *sp;
  const FieldPtr& k = s.field();
  if (s.has_halfturns()) fail(ErrorKind::Unsupported, "anchor construction needs a translation surface");
  Mat2 Di = D.inverse();
  struct Frame {
    Vec2 c;  // image of chart point x is D x + c in the frame
    int start_tri;
    Xform start_T;
  };
  std::map<int, Frame> frames;
  std::vector<MapPiece> pieces;
  {
    Vec2 a = s.corner_pos(src_corner);
    Vec2 b = s.corner_pos(dst_corner);
    Vec2 m = s.corner_out(src_corner) + s.corner_in(src_corner);
    auto [c, X] = s.corner_containing(dst_corner, D * m);
    frames[src_corner / 3] = Frame{b - D * a, c / 3, X.inverse()};
  }
  std::deque<int> queue{src_corner / 3};
  std::set<int> done{src_corner / 3};
  while (!queue.empty()) {
    int t = queue.front();
    queue.pop_front();
    const Triangle& tr = s.tri(t);
    Frame fr = frames.at(t);
    Polygon src{tr.v[0], tr.v[1], tr.v[2]};
    Polygon img = transform(src, D, fr.c);
    DevelopResult dev = s.develop_region(img, fr.start_tri, fr.start_T, true);
    if (dev.hit_vertex) fail(ErrorKind::Discontinuous, "image of a triangle contains a cone point");
    FieldElement covered = k->zero();
    Vec2 nc = -(Di * fr.c);
    for (const auto& pc : dev.pieces) {
      covered += signed_area2(pc.region);
      pieces.push_back({tr.poly, transform(pc.region, Di, nc), D, fr.c - pc.T.t, s.tri(pc.tri).poly});
    }
    if (covered != signed_area2(img)) fail(ErrorKind::Discontinuous, "image of a triangle does not develop");
    for (int e = 0; e < 3; ++e) {
      int n2 = tr.nbr[e];
      if (done.count(n2)) continue;
      const Xform& G = tr.to_nbr[e];
      Vec2 m = Rational(1, 2) * (tr.v[e] + tr.v[(e + 1) % 3]);
      Vec2 Am = D * m + fr.c;
      const Triangle& t2 = s.tri(n2);
      Vec2 far = G.inverse()(t2.v[(tr.nbr_edge[e] + 2) % 3]);
      Vec2 dir = D * (far - m);
      const DevPiece* host = nullptr;
      for (const auto& pc : dev.pieces)
        if (in_closed(pc.region, Am)) {
          host = &pc;
          break;
        }
      check_internal(host != nullptr, "anchor propagation lost the edge midpoint");
      Xform Tinv = host->T.inverse();
      SurfacePoint z{s.tri(host->tri).poly, Tinv(Am)};
      ChartRep r = s.start_for(z, Tinv.linear(dir));
      frames[n2] = Frame{fr.c - D * G.t, r.tri, host->T * r.X.inverse()};
      done.insert(n2);
      queue.push_back(n2);
    }
  }
  return PiecewiseAffineMap(sp, std::move(pieces));
}

SurfacePtr change_coordinates(const FlatSurface& s, const Mat2& A) {
  const FieldPtr& k = A.a.field();
  if (A.det().sign() <= 0) fail(ErrorKind::DegenerateInput, "coordinate change must preserve orientation");
  SurfaceSpec spec = s.spec();
  spec.field = k;
  for (auto& p : spec.polygons)
    for (auto& v : p.vertices) v = A * Vec2{coerce(v.x, k), coerce(v.y, k)};
  return FlatSurface::validate(spec);
}

PiecewiseAffineMap change_coordinates(const PiecewiseAffineMap& f, const SurfacePtr& target, const Mat2& A) {
  const FieldPtr& k = A.a.field();
  Mat2 Ai = A.inverse();
  auto cv = [&](const Vec2& v) { return Vec2{coerce(v.x, k), coerce(v.y, k)}; };
  auto cm = [&](const Mat2& m) { return Mat2{coerce(m.a, k), coerce(m.b, k), coerce(m.c, k), coerce(m.d, k)}; };
  std::vector<MapPiece> out;
  for (const auto& pc : f.pieces()) {
    Polygon r;
    for (const auto& v : pc.region) r.push_back(A * cv(v));
    out.push_back({pc.src, std::move(r), A * cm(pc.D) * Ai, A * cv(pc.t), pc.dst});
  }
  return PiecewiseAffineMap(target, std::move(out));
}

EigenFrame eigen_frame(long a, long b, long c, long d) {
  if (a * d - b * c != 1) fail(ErrorKind::NotHyperbolic, "matrix must have determinant 1");
  long tr = a + d;
  if (tr >= -2 && tr <= 2) fail(ErrorKind::NotHyperbolic, "trace " + std::to_string(tr) + " has absolute value <= 2");
  if (tr < -2) fail(ErrorKind::Unsupported, "negative trace: the derivative cannot be diag(lambda, 1/lambda) with lambda > 1");
  FieldPtr k = RealNumberField::create(Polynomial({Rational(1), Rational(-tr), Rational(1)}), {Rational(tr - 1), Rational(tr)});
  FieldElement lam = k->gen(), mu = k->from_rational(tr) - lam;
  auto eig = [&](const FieldElement& e) {
    if (b != 0) return Vec2{k->from_rational(b), e - k->from_rational(a)};
    return Vec2{e - k->from_rational(d), k->from_rational(c)};
  };
  Vec2 v1 = eig(lam), v2 = eig(mu);
  if (cross(v1, v2).sign() < 0) v2 = -v2;
  Mat2 P{v1.x, v2.x, v1.y, v2.y};
  return {k, lam, P.inverse()};
}

std::pair<SurfacePtr, AffineAutomorphism> torus_from_matrix(long a, long b, long c, long d) {
  EigenFrame ef = eigen_frame(a, b, c, d);
  const FieldElement& lam = ef.lambda;
  FieldElement mu = lam.inverse();
  const Mat2& Pi = ef.to_eigen;

  FieldPtr q = RealNumberField::rationals();
  auto r = [&](long n) { return q->from_rational(n); };
  SurfaceSpec sq;
  sq.field = q;
  sq.polygons.push_back({"T", {{r(0), r(0)}, {r(1), r(0)}, {r(1), r(1)}, {r(0), r(1)}}});
  sq.gluings = {{0, 0, 0, 2, false}, {0, 1, 0, 3, false}};
  sq.marks = {{0, 0}};
  SurfacePtr square = FlatSurface::validate(sq);
  SurfacePtr s = change_coordinates(*square, Pi);
  int corner = s->vertex_corners(0).front();
  PiecewiseAffineMap m = affine_map_from_anchor(s, Mat2::diag(lam, mu), corner, corner);
  return {s, AffineAutomorphism::validate(m)};
}

}  // namespace veerfix
