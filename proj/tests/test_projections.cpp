#include <cmath>

#include "doctest.h"
#include "veerfix/projections.hpp"

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

FieldElement q(const FlatSurface& s, long n, long d = 1) { return s.field()->from_rational(Rational(n, d)); }

Vec2 v(const FlatSurface& s, long x, long y) { return {q(s, x), q(s, y)}; }

}  // namespace

TEST_CASE("annular distance on the square torus") {
  SurfacePtr s = origami_surface(one_square_pattern());
  Cylinder cyl = cylinder_with_holonomy(*s, v(*s, 1, 0));
  auto x = saddle_from(*s, 0, v(*s, 3, 1));
  auto y = saddle_from(*s, 0, v(*s, 0, 1));
  AnnularArc ax = annular_arc(*s, cyl, x), ay = annular_arc(*s, cyl, y);
  CHECK(ax.winding - ay.winding == 3);
  CHECK(annular_distance(ax, ay) == 4);
  CHECK(annular_distance(ay, ax) == 4);
  CHECK(annular_distance(*s, cyl, x, y) == 4);
  CHECK(annular_distance(*s, cyl, x, x) == 0);
  CHECK(annular_distance(ax, ax) == 1);
  CHECK(kind_of([&] { annular_arc(*s, cyl, saddle_from(*s, 0, v(*s, 1, 0))); }) == ErrorKind::NoEssentialCrossing);

  // a full twist applied to both arcs leaves the distance unchanged
  PiecewiseAffineMap t = cylinder_twist(s, cyl, 1);
  Mat2 D = t.pieces().front().D;
  CHECK(D == Mat2{q(*s, 1), q(*s, 1), q(*s, 0), q(*s, 1)});
  for (int n = 1; n <= 4; ++n) {
    Mat2 Dn = D;
    for (int i = 1; i < n; ++i) Dn = Dn * D;
    CHECK(annular_distance(twisted_arc(cyl, ax, Dn), twisted_arc(cyl, ay, Dn)) == 4);
    CHECK(annular_distance(ay, twisted_arc(cyl, ay, Dn)) == n + 1);
  }
}

TEST_CASE("lamination projections on the torus") {
  auto [s, f] = torus_from_matrix(2, 1, 1, 1);
  auto cyls = cylinders_up_to(*s, q(*s, 1));
  REQUIRE(!cyls.empty());
  for (const auto& c : cyls) {
    auto minus = lamination_projection(f, c, -1);
    auto plus = lamination_projection(f, c, +1);
    CHECK(minus.window.size() == 4);
    CHECK(plus.window.size() == 4);
    // the stabilized slopes approach the eigendirections from opposite sides
    CHECK(compare(minus.arc.slope, plus.arc.slope) != 0);
    auto d = lamination_distance(f, c);
    CHECK(d.status == EstimateStatus::Stabilized);
    CHECK(d.value >= 1);
  }
  CHECK(kind_of([&] { lamination_projection(f, cyls.front(), -1, 1); }) == ErrorKind::NonStabilizing);
}

TEST_CASE("degree-k rectangles force annular distance at least 2k") {
  for (auto m : {std::array<int, 4>{3, 2, 1, 1}, std::array<int, 4>{5, 4, 1, 1}}) {
    auto [s, f] = torus_from_matrix(m[0], m[1], m[2], m[3]);
    int seen = 0;
    for (const auto& e : veering_edges_in_box(*s, q(*s, 2), q(*s, 2))) {
      auto R = is_veering_edge(*s, e.fwd);
      REQUIRE(R.has_value());
      if (R->degree < 2) continue;
      REQUIRE(R->witness.has_value());
      ++seen;
      CHECK(lamination_distance(f, *R->witness).value >= 2 * R->degree);
    }
    CHECK(seen >= 1);
  }
  auto ex = build_nonoverlapped_example();
  const FlatSurface& s = *ex.surface;
  int seen = 0;
  for (const auto& e : veering_edges_in_box(s, q(s, 2), q(s, 2))) {
    auto R = is_veering_edge(s, e.fwd);
    if (!R || R->degree < 2) continue;
    ++seen;
    CHECK(lamination_distance(ex.f, *R->witness).value >= 2 * R->degree);
  }
  CHECK(seen >= 1);
}

TEST_CASE("curves disjoint from their images") {
  auto [s, f] = torus_from_matrix(2, 1, 1, 1);
  CHECK(!irreducibility_witness_search(f, q(*s, 2)).has_value());
  CHECK(!irreducibility_witness_search(f, q(*s, 1, 10)).has_value());

  auto ex = build_nonoverlapped_example();
  const FlatSurface& t = *ex.surface;
  auto w = irreducibility_witness_search(ex.f, q(t, 2));
  REQUIRE(w.has_value());
  CHECK(core_self_intersection(ex.f, *w) == 0);
  // the witness lies in the orbit of alpha
  const Mat2& D = ex.f.derivative();
  bool in_orbit = false;
  for (const Vec2& h : {ex.alpha.hol, D * ex.alpha.hol, D.inverse() * ex.alpha.hol})
    in_orbit = in_orbit || w->hol == h || w->hol == -h;
  CHECK(in_orbit);
  bool has_alpha = false;
  for (const auto& c : cylinders_up_to(t, q(t, 2))) has_alpha = has_alpha || c.hol == ex.alpha.hol || c.hol == -ex.alpha.hol;
  CHECK(has_alpha);
}

TEST_CASE("stretch estimates") {
  auto [s, f] = torus_from_matrix(2, 1, 1, 1);
  auto est = stretch_estimate(f.map(), 12);
  double lam = (3 + std::sqrt(5.0)) / 2;
  CHECK(std::abs(est.value - lam) < 0.01 * lam);
  CHECK(std::abs(est.value - lam) <= est.error + 1e-9);

  Cylinder c = cylinders_up_to(*s, q(*s, 1)).front();
  CHECK(std::abs(stretch_estimate(cylinder_twist(s, c, 0), 5).value - 1.0) < 1e-9);

  auto ex = build_nonoverlapped_example();
  double prev = 0;
  for (int n = 1; n <= 5; ++n) {
    double value = stretch_estimate(twist_composite(ex.f, ex.alpha, n), 8).value;
    CHECK(value > prev);
    prev = value;
  }
}

TEST_CASE("coarse tables") {
  CHECK(coarse_table({}).empty());
  auto [s, f] = torus_from_matrix(2, 1, 1, 1);
  std::vector<FamilyMember> fam;
  for (int n = 1; n <= 3; ++n) {
    AffineAutomorphism g = f.power(n);
    fam.push_back({"M^" + std::to_string(n), g.map(), g, std::nullopt, 0, std::nullopt});
  }
  auto rows = coarse_table(fam);
  REQUIRE(rows.size() == 3);
  const int totals[] = {1, 5, 16};
  double ll = std::log(f.lambda().to_double());
  for (int i = 0; i < 3; ++i) {
    CHECK(!rows[i].failed);
    CHECK(rows[i].total == totals[i]);
    CHECK(rows[i].stretch_exact);
    CHECK(std::abs(rows[i].log_stretch - (i + 1) * ll) < 1e-9);
    CHECK(rows[i].witness == "none_found(4)");
  }
  std::string csv = table_csv(rows);
  CHECK(csv.rfind("id,status,total_fixed,regular_fixed,log_stretch,stretch_kind,annular_term,annular_status,witness\n", 0) == 0);
  CHECK(table_text(rows).find("M^3") != std::string::npos);
}
