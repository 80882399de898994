#include <cmath>

#include "doctest.h"
#include "veerfix/fixcount.hpp"

using namespace veerfix;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

bool same_points(const FixReport& a, const FixReport& b) {
  if (a.points.size() != b.points.size()) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i)
    if (!(a.points[i].key == b.points[i].key)) return false;
  return true;
}

}  // namespace

TEST_CASE("fixed points of the cat map and its square") {
  auto [s, f] = torus_from_matrix(2, 1, 1, 1);
  FixReport r1 = count_fixed_points(f);
  CHECK(r1.total == 1);
  CHECK(r1.regular == 0);
  CHECK(r1.points[0].kind == FixKind::Marked);
  CHECK(r1.points[0].index == -1);
  CHECK(r1.lefschetz == -1);
  CHECK(lefschetz_number(f) == -1);

  AffineAutomorphism f2 = f.power(2);
  FixReport r2 = count_fixed_points(f2);
  CHECK(r2.total == 5);
  CHECK(r2.regular == 4);
  CHECK(r2.lefschetz == -5);
  CHECK(lefschetz_number(f2) == -5);
  for (const auto& p : r2.points) CHECK(f2.map().apply_key({p.poly, p.p}) == p.key);

  Section T = complete_to_section(s, {});
  CHECK(same_points(oracle_count_fixed_points(f2, T), r2));
  CHECK(same_points(oracle_count_fixed_points(f, T), r1));
  // the inverse has the same fixed points; sections need horizontal expansion
  CHECK(same_points(oracle_count_fixed_points(f2.inverse(), T), r2));
  CHECK(kind_of([&] { count_fixed_points(f2.inverse()); }) == ErrorKind::LambdaNotExpanding);
  // conjugating by a diagonal change of coordinates preserves the count
  const FieldPtr& K = s->field();
  Mat2 A = Mat2::diag(K->from_rational(2), K->from_rational(Rational(1, 2)));
  SurfacePtr s2 = change_coordinates(*s, A);
  AffineAutomorphism g = AffineAutomorphism::validate(change_coordinates(f2.map(), s2, A));
  CHECK(count_fixed_points(g).total == 5);
}

TEST_CASE("fourth power and the Lefschetz identity") {
  auto [s, f] = torus_from_matrix(2, 1, 1, 1);
  AffineAutomorphism f4 = f.power(4);
  FixReport r = count_fixed_points(f4);
  CHECK(r.total == 45);
  CHECK(r.lefschetz == lefschetz_number(f4));
  CHECK(lefschetz_number(f4) == 2 - 47);
  CHECK(same_points(oracle_count_fixed_points(f4, complete_to_section(s, {})), r));
  // other hyperbolic matrices: |2 - tr| fixed points
  for (auto m : std::vector<std::array<long, 4>>{{3, 1, 2, 1}, {1, 1, 1, 2}, {5, 2, 2, 1}}) {
    auto [s2, g] = torus_from_matrix(m[0], m[1], m[2], m[3]);
    FixReport rg = count_fixed_points(g);
    CHECK(rg.total == std::abs(2 - (m[0] + m[3])));
    CHECK(lefschetz_number(g) == 2 - (m[0] + m[3]));
  }
}

TEST_CASE("rectangle counts obey the sandwich bound on every small veering edge") {
  auto [s, f] = torus_from_matrix(2, 1, 1, 1);
  AffineAutomorphism f2 = f.power(2);
  auto q = [&](long n) { return s->field()->from_rational(n); };
  int checked = 0;
  for (const auto& e : veering_edges_in_box(*s, q(3), q(3))) {
    auto R = is_veering_edge(*s, e.fwd);
    REQUIRE(R);
    VEdge fe = image_edge(f2.map(), e);
    int i = intersection_number(e, fe);
    int n = static_cast<int>(fixed_points_in_rectangle(f2, e).size());
    CHECK(n <= i);
    CHECK(n * R->degree >= i);
    if (R->degree == 1) CHECK(n == i);
    ++checked;
  }
  CHECK(checked > 3);
}

TEST_CASE("max edge, indices and the crossing-matrix bound") {
  auto [s, f] = torus_from_matrix(2, 1, 1, 1);
  AffineAutomorphism f2 = f.power(2);
  Section T = annular_avoiding_f_section(f2, complete_to_section(s, {}));
  int v = 0;
  VEdge e = max_edge(T, f2, &v);
  CHECK(T.contains(e));
  CHECK(v >= 1);
  CHECK(v <= 8);

  // a point that is not fixed
  const FlatSurface& S = *s;
  SurfacePoint p{S.tri(0).poly, S.tri(0).v[0] + Rational(1, 3) * (S.tri(0).v[1] - S.tri(0).v[0]) +
                                    Rational(1, 3) * (S.tri(0).v[2] - S.tri(0).v[0])};
  CHECK(kind_of([&] { fixed_point_index(f, p); }) == ErrorKind::NotFixed);

  MarkovBound mb = markov_upper_bound(f);
  CHECK(mb.upper_bound >= 1);
  double lam = f.lambda().to_double();
  CHECK(mb.perron_lo.get_d() <= lam + 1e-9);
  CHECK(mb.perron_hi.get_d() >= lam - 1e-9);
  for (int n = 1; n <= 3; ++n) {
    AffineAutomorphism g = f.power(n);
    MarkovBound b = markov_upper_bound(g);
    CHECK(b.upper_bound >= count_fixed_points(g).total);
  }
}

TEST_CASE("fixed point growth follows the dilatation") {
  auto [s, f] = torus_from_matrix(2, 1, 1, 1);
  double ll = std::log(f.lambda().to_double());
  for (int n = 3; n <= 5; ++n) {
    int total = count_fixed_points(f.power(n)).total;
    double ratio = std::log(static_cast<double>(total)) / (n * ll);
    CHECK(ratio >= 0.7);
    CHECK(ratio <= 1.0);
  }
}
