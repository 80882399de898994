#include "doctest.h"

#include "veerfix/flatsurf.hpp"

using namespace veerfix;

namespace {

const char* kSquareTorus = R"(
[SURFACE]
polygon A = (0,0) (1,0) (1,1) (0,1)
glue A.0 A.2 translation
glue A.1 A.3 translation
mark A.0
)";

// regular octagon is not rational; use the genus-two L shape from three squares
// glued as an origami with horizontal (1 2) and vertical (1 3)
const char* kLShape = R"(
[SURFACE]
polygon S1 = (0,0) (1,0) (1,1) (0,1)
polygon S2 = (1,0) (2,0) (2,1) (1,1)
polygon S3 = (0,1) (1,1) (1,2) (0,2)
glue S1.1 S2.3 translation
glue S2.1 S1.3 translation
glue S1.2 S3.0 translation
glue S3.2 S1.0 translation
glue S2.0 S2.2 translation
glue S3.1 S3.3 translation
)";

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

}  // namespace

TEST_CASE("square torus validates") {
  Document d = parse_document(kSquareTorus);
  const FlatSurface& s = *d.surface;
  CHECK(s.num_vertices() == 1);
  CHECK(s.euler_characteristic() == 0);
  CHECK(s.genus() == 1);
  CHECK(s.cone_points()[0].angle_pi == 2);
  CHECK(s.cone_points()[0].marked);
  CHECK(s.section_size() == 3);
  CHECK(s.area() == s.field()->one());
}

TEST_CASE("L-shaped origami is genus two with one 6pi point") {
  Document d = parse_document(kLShape);
  const FlatSurface& s = *d.surface;
  CHECK(s.genus() == 2);
  CHECK(s.num_vertices() == 1);
  CHECK(s.cone_points()[0].angle_pi == 6);
  CHECK(s.section_size() == 9);
}

TEST_CASE("validation errors") {
  CHECK(kind_of([] {
          parse_document("[SURFACE]\npolygon A = (0,0) (2,0) (1,1) (0,1)\nglue A.0 A.2 translation\nglue A.1 A.3 translation\nmark A.0\n");
        }) == ErrorKind::LengthMismatch);
  CHECK(kind_of([] { parse_document("[SURFACE]\npolygon A = (0,0) (1,0) (1,1) (0,1)\nglue A.0 A.2 translation\nmark A.0\n"); }) ==
        ErrorKind::UnmatchedEdge);
  CHECK(kind_of([] {
          parse_document("[SURFACE]\npolygon A = (0,0) (1,0) (0,1) (1,1)\nglue A.0 A.2 translation\nglue A.1 A.3 translation\n");
        }) == ErrorKind::NonConvexPolygon);
  // the unmarked torus has a regular vertex
  CHECK(kind_of([] { parse_document("[SURFACE]\npolygon A = (0,0) (1,0) (1,1) (0,1)\nglue A.0 A.2 translation\nglue A.1 A.3 translation\n"); }) ==
        ErrorKind::DegenerateInput);
  CHECK(kind_of([] { parse_document("[SURFACE]\npolygon A = (0,0) (1/2,0) (1,1) (0,1)\n"); }) != ErrorKind::Internal);
  CHECK(kind_of([] { parse_document("[SURFACE]\npolygon A = (0.5,0) (1,0) (1,1)\n"); }) == ErrorKind::Parse);
}

TEST_CASE("parse errors carry line and column") {
  try {
    parse_document("[SURFACE]\npolygon A = (0,0) (1,0) (1,1) (0,1)\nglue A.0 A.2 sideways\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    CHECK(std::string(e.what()).find("column") != std::string::npos);
  }
}

TEST_CASE("trace and develop on the square torus") {
  Document d = parse_document(kSquareTorus);
  const FlatSurface& s = *d.surface;
  FieldPtr k = s.field();
  auto q = [&](long n, long m = 1) { return k->from_rational(Rational(n, m)); };
  // slope 1/2 from the vertex hits the vertex again at holonomy (2, 1)
  int c = s.vertex_corners(0).front();
  Trace tr = s.trace_from_corner(c, {q(2), q(1)}, q(5), true);
  CHECK(tr.end_corner >= 0);
  CHECK(tr.t_end == q(1));
  // from an interior point a long segment wraps but never hits the vertex
  Trace t2 = s.trace_from_point({0, {q(1, 3), q(1, 7)}}, {q(1), q(0)}, q(10));
  CHECK(t2.t_end == q(10));
  CHECK(t2.steps.size() >= 10);
  CHECK(kind_of([&] { s.trace_from_point({0, {q(1, 2), q(1, 2)}}, {q(1), q(1)}, q(3)); }) ==
        ErrorKind::PassesThroughSingularity);
  // a 3 x 1/3 rectangle develops over several triangles without meeting the vertex
  Polygon rect{{q(1, 10), q(1, 10)}, {q(31, 10), q(1, 10)}, {q(31, 10), q(4, 10)}, {q(1, 10), q(4, 10)}};
  auto rep = s.representatives({0, {q(1, 10), q(1, 10)}});
  REQUIRE_FALSE(rep.empty());
  DevelopResult dev = s.develop_region(rect, rep[0].tri, rep[0].X);
  CHECK_FALSE(dev.hit_vertex);
  FieldElement a = k->zero();
  for (const auto& p : dev.pieces) a += signed_area2(p.region);
  CHECK(a == signed_area2(rect));
  Polygon big{{q(1, 10), q(1, 10)}, {q(21, 10), q(1, 10)}, {q(21, 10), q(4, 10)}, {q(1, 10), q(4, 10)}};
  CHECK_FALSE(s.develop_region(big, rep[0].tri, rep[0].X).hit_vertex);
  Polygon hits{{q(1, 10), q(1, 10)}, {q(21, 10), q(1, 10)}, {q(21, 10), q(14, 10)}, {q(1, 10), q(14, 10)}};
  CHECK(s.develop_region(hits, rep[0].tri, rep[0].X).hit_vertex);
}

TEST_CASE("torus automorphism from [[2,1],[1,1]]") {
  auto [s, f] = torus_from_matrix(2, 1, 1, 1);
  FieldPtr k = s->field();
  CHECK(k->minpoly().to_string('x') == Polynomial::parse("x^2 - 3*x + 1", 'x').to_string('x'));
  CHECK(f.lambda() == k->gen());
  CHECK(f.lambda() > k->from_rational(2));
  CHECK(f.vertex_permutation() == std::vector<int>{0});
  f.map().validate();
  // apply then inverse is the identity on sample points
  auto g = f.inverse();
  const Polygon& P = s->polygon(0);
  for (int i = 1; i < 8; ++i) {
    Vec2 x = Rational(i, 9) * P[0] + Rational(9 - i, 27) * P[1] + Rational(2 * (9 - i), 27) * P[2];
    SurfacePoint p{0, x};
    CHECK(s->canonical(g.apply(f.apply(p))) == s->canonical(p));
  }
  CHECK(compose(g.map(), f.map()).is_identity());
  CHECK(compose(f.map(), g.map()).is_identity());
}

TEST_CASE("powers of a torus map match matrix powers") {
  auto [s, f] = torus_from_matrix(2, 1, 1, 1);
  auto [s2, f2] = torus_from_matrix(5, 3, 3, 2);
  auto p = f.power(2);
  CHECK(p.lambda() == f.lambda() * f.lambda());
  CHECK(p.vertex_permutation() == std::vector<int>{0});
  p.map().validate();
  // λ(M^2) is λ(M)^2 as a real number
  auto a = p.lambda().approx(60), b = f2.lambda().approx(60);
  CHECK(a.hi >= b.lo);
  CHECK(b.hi >= a.lo);
  auto p5 = f.power(5);
  p5.map().validate();
  CHECK(p5.lambda() == f.lambda().pow(5));
}

TEST_CASE("torus generator rejects non-hyperbolic matrices") {
  CHECK(kind_of([] { torus_from_matrix(1, 1, 0, 1); }) == ErrorKind::NotHyperbolic);
  CHECK(kind_of([] { torus_from_matrix(0, -1, 1, 0); }) == ErrorKind::NotHyperbolic);
  CHECK(kind_of([] { torus_from_matrix(2, 1, 1, 2); }) == ErrorKind::NotHyperbolic);
}

TEST_CASE("automorphism validation errors") {
  Document d = parse_document(kSquareTorus);
  FieldPtr k = d.surface->field();
  auto q = [&](long n, long m = 1) { return k->from_rational(Rational(n, m)); };
  Polygon whole = d.surface->polygon(0);
  PiecewiseAffineMap id(d.surface, {{0, whole, Mat2::identity(k), {q(0), q(0)}, 0}});
  id.validate();
  CHECK(id.is_identity());
  CHECK(kind_of([&] { AffineAutomorphism::validate(id); }) == ErrorKind::LambdaNotExpanding);
  PiecewiseAffineMap shear(d.surface, {{0, whole, Mat2{q(1), q(1), q(0), q(1)}, {q(0), q(0)}, 0}});
  CHECK(kind_of([&] { AffineAutomorphism::validate(shear); }) == ErrorKind::NotConstantDerivative);
  PiecewiseAffineMap half(d.surface, {{0, {{q(0), q(0)}, {q(1), q(0)}, {q(1), q(1, 2)}, {q(0), q(1, 2)}}, Mat2::identity(k),
                                       {q(0), q(0)}, 0}});
  CHECK(kind_of([&] { half.validate(); }) == ErrorKind::NotBijective);
  // the right half cut in two and its quarters swapped: a jump along x = 1/2
  auto box = [&](long x0, long y0, long x1, long y1) {
    return Polygon{{q(x0, 2), q(y0, 2)}, {q(x1, 2), q(y0, 2)}, {q(x1, 2), q(y1, 2)}, {q(x0, 2), q(y1, 2)}};
  };
  PiecewiseAffineMap torn(d.surface, {{0, box(0, 0, 1, 2), Mat2::identity(k), {q(0), q(0)}, 0},
                                      {0, box(1, 0, 2, 1), Mat2::identity(k), {q(0), q(1, 2)}, 0},
                                      {0, box(1, 1, 2, 2), Mat2::identity(k), {q(0), q(-1, 2)}, 0}});
  CHECK(kind_of([&] { torn.validate(); }) == ErrorKind::Discontinuous);
}

TEST_CASE("document round trip") {
  auto [s, f] = torus_from_matrix(3, 2, 1, 1);
  FieldElement lam = f.lambda();
  std::string text = write_document(*s, &f.map(), &lam);
  Document d = parse_document(text);
  REQUIRE(d.map);
  REQUIRE(d.lambda);
  CHECK(d.map->pieces().size() == f.map().pieces().size());
  auto g = AffineAutomorphism::validate(*d.map);
  CHECK(g.lambda().to_string() == lam.to_string());
  CHECK(write_document(*d.surface, &g.map(), &g.lambda()) == text);
}
