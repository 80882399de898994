#include <numeric>

#include "doctest.h"
#include "veerfix/saddle.hpp"

using namespace veerfix;

namespace {

const char* kSquareTorus = R"(
[SURFACE]
polygon A = (0,0) (1,0) (1,1) (0,1)
glue A.0 A.2 translation
glue A.1 A.3 translation
mark A.0
)";

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

// a 1 x 5 cylinder closed up into a torus by a horizontal shear of 0
const char* kTallTorus = R"(
[SURFACE]
polygon A = (0,0) (1,0) (1,5) (0,5)
glue A.0 A.2 translation
glue A.1 A.3 translation
mark A.0
)";

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

// primitive lattice vectors in the box [-b, b]^2
int lattice_oracle(int b) {
  int n = 0;
  for (int x = -b; x <= b; ++x)
    for (int y = -b; y <= b; ++y)
      if ((x || y) && std::gcd(std::abs(x), std::abs(y)) == 1) ++n;
  return n;
}

}  // namespace

TEST_CASE("torus saddle connections match the lattice oracle") {
  Document d = parse_document(kSquareTorus);
  const FlatSurface& s = *d.surface;
  auto q = [&](long n) { return s.field()->from_rational(n); };
  auto one = enumerate_saddles(s, q(1), q(1));
  CHECK(one.size() == 8);
  for (int b = 1; b <= 10; ++b) CHECK(enumerate_saddles(s, q(b), q(b)).size() == static_cast<std::size_t>(lattice_oracle(b)));
  auto tiny = enumerate_saddles(s, s.field()->from_rational(Rational(1, 2)), q(1));
  CHECK(tiny.size() == 2);  // only (0, +-1)
  CHECK(enumerate_saddles(s, s.field()->from_rational(Rational(1, 2)), s.field()->from_rational(Rational(1, 2))).empty());
  // every enumerated connection re-traces to itself
  for (const auto& c : enumerate_saddles(s, q(3), q(3))) {
    auto c2 = saddle_from(s, c.start_corner, c.hol);
    CHECK(same_oriented(c, c2));
    CHECK(c2.chain == c.chain);
    auto r = reversed(s, c);
    CHECK(r.hol == -c.hol);
    CHECK(same_segment(s, c, r));
  }
}

TEST_CASE("genus two enumeration is symmetric under reversal") {
  Document d = parse_document(kLShape);
  const FlatSurface& s = *d.surface;
  auto q = [&](long n) { return s.field()->from_rational(n); };
  auto all = enumerate_saddles(s, q(3), q(3));
  CHECK(!all.empty());
  std::size_t matched = 0;
  for (const auto& c : all) {
    auto r = reversed(s, c);
    for (const auto& o : all)
      if (same_oriented(o, r)) {
        ++matched;
        break;
      }
  }
  CHECK(matched == all.size());
  // sorted and duplicate free
  for (std::size_t i = 1; i < all.size(); ++i) CHECK(key_less(all[i - 1], all[i]));
}

TEST_CASE("veering edges on the marked torus") {
  Document d = parse_document(kSquareTorus);
  const FlatSurface& s = *d.surface;
  auto q = [&](long n) { return s.field()->from_rational(n); };
  int c = s.vertex_corners(0).front();
  auto r11 = is_veering_edge(s, saddle_from(s, c, {q(1), q(1)}));
  REQUIRE(r11);
  CHECK(r11->degree == 1);
  CHECK_FALSE(is_veering_edge(s, saddle_from(s, c, {q(2), q(3)})));
  for (int n = 1; n <= 6; ++n) {
    auto r = is_veering_edge(s, saddle_from(s, c, {q(1), q(n)}));
    REQUIRE(r);
    // the 1 x n rectangle covers the unit torus n times
    CHECK(r->degree == n);
  }
  CHECK(kind_of([&] { is_veering_edge(s, saddle_from(s, c, {q(1), q(0)})); }) == ErrorKind::HorizontalOrVertical);
}

TEST_CASE("degree of a rectangle wrapping a thin cylinder") {
  Document d = parse_document(kTallTorus);
  const FlatSurface& s = *d.surface;
  auto q = [&](long n) { return s.field()->from_rational(n); };
  int c = s.vertex_corners(0).front();
  // holonomy (3, 5): the open 3 x 5 rectangle wraps the unit circumference
  // three times and meets no lattice point of Z x 5Z
  auto R = is_veering_edge(s, saddle_from(s, c, {q(3), q(5)}));
  REQUIRE(R);
  CHECK(R->degree == 3);
  REQUIRE(R->witness);
  CHECK(R->witness->hol.y.is_zero());
  CHECK(R->witness->hol.x.abs() == q(1));
  CHECK(R->witness->height * dot(R->witness->hol, R->witness->hol) == q(5));
  CHECK_FALSE(R->ambiguous_witness);
}

TEST_CASE("intersection numbers on the marked torus") {
  Document d = parse_document(kSquareTorus);
  const FlatSurface& s = *d.surface;
  auto q = [&](long n) { return s.field()->from_rational(n); };
  int c = s.vertex_corners(0).front();
  auto h = saddle_from(s, c, {q(1), q(0)});
  auto v = saddle_from(s, c, {q(0), q(1)});
  CHECK(intersection_number(s, h, v) == 0);
  auto a = saddle_from(s, c, {q(1), q(2)});
  auto b = saddle_from(s, c, {q(2), q(1)});
  CHECK(intersection_number(s, a, b) == 2);
  CHECK(intersection_number(s, b, a) == 2);
  // |det| - 1 interior crossings for primitive lattice vectors
  for (int x = 1; x <= 4; ++x)
    for (int y = 1; y <= 4; ++y) {
      if (std::gcd(x, y) != 1) continue;
      if (std::gcd(y, x + 1) != 1) continue;
      auto e = saddle_from(s, c, {q(x), q(y)});
      auto f = saddle_from(s, c, {q(-y), q(x + 1)});
      int det = std::abs(x * (x + 1) + y * y);
      CHECK(intersection_number(s, e, f) == det - 1);
    }
  CHECK(kind_of([&] { intersection_number(s, a, a); }) == ErrorKind::OverlappingSegments);
}

TEST_CASE("cylinders on the torus") {
  Document d = parse_document(kSquareTorus);
  const FlatSurface& s = *d.surface;
  auto q = [&](long n) { return s.field()->from_rational(n); };
  auto hor = cylinders_in_direction(s, {q(1), q(0)}, q(1));
  REQUIRE(hor.size() == 1);
  CHECK(hor[0].hol == Vec2{q(1), q(0)});
  CHECK(hor[0].height == q(1));
  auto diag = cylinders_in_direction(s, {q(1), q(1)}, q(1));
  REQUIRE(diag.size() == 1);
  CHECK(diag[0].hol == Vec2{q(1), q(1)});
  CHECK(diag[0].area == q(1));
  CHECK(cylinders_in_direction(s, {q(1), q(0)}, s.field()->from_rational(Rational(1, 2))).empty());
}

TEST_CASE("horizontal cylinders of the L shape") {
  Document d = parse_document(kLShape);
  const FlatSurface& s = *d.surface;
  auto q = [&](long n) { return s.field()->from_rational(n); };
  auto hor = cylinders_in_direction(s, {q(1), q(0)}, q(5));
  REQUIRE(hor.size() == 2);
  std::vector<long> circ;
  for (const auto& c : hor) {
    circ.push_back(c.hol.x.rational_value().get_num().get_si());
  }
  std::sort(circ.begin(), circ.end());
  CHECK(circ == std::vector<long>{1, 2});
  for (const auto& c : hor) CHECK(c.area == q(c.hol.x.rational_value().get_num().get_si()));
}
