// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "veerfix/projections.hpp"

using namespace veerfix;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

// accumulates failures without stopping at the first one
struct Check {
  bool ok = true;
  std::ostringstream note;
  void require(bool cond, const std::string& what) {
    if (cond) return;
    if (ok) note << "first failure: " << what;
    ok = false;
  }
};

FieldElement q(const FlatSurface& s, long n, long d = 1) { return s.field()->from_rational(Rational(n, d)); }

FieldElement norm2(const Vec2& v) { return v.x * v.x + v.y * v.y; }

struct CorpusSurface {
  std::string name;
  SurfacePtr s;
  std::vector<std::pair<std::string, AffineAutomorphism>> maps;
};

std::vector<CorpusSurface> corpus() {
  std::vector<CorpusSurface> out;
  auto [t, m] = torus_from_matrix(2, 1, 1, 1);
  CorpusSurface torus{"torus", t, {}};
  for (int n = 1; n <= 4; ++n) torus.maps.emplace_back("M^" + std::to_string(n), m.power(n));
  out.push_back(torus);
  auto [l, g] = thurston_construction(l_shaped_pattern(), 1, 1);
  out.push_back({"L-shape", l, {{"f", g}}});
  NonoverlappedExample ex = nonoverlapped_example();
  out.push_back({"nonoverlapped", ex.surface, {{"f", ex.f}}});
  return out;
}

// squared length of the shortest saddle connection
FieldElement systole2(const FlatSurface& s) {
  for (long b = 1;; b *= 2) {
    auto v = enumerate_saddles(s, q(s, b), q(s, b));
    if (v.empty()) continue;
    FieldElement best = norm2(v.front().hol);
    for (const auto& c : v)
      if (norm2(c.hol) < best) best = norm2(c.hol);
    if (!(q(s, b * b) < best)) return best;
  }
}

// veering edges of length at most r times the systole
std::vector<VEdge> short_edges(const FlatSurface& s, long r) {
  FieldElement sys2 = systole2(s);
  FieldElement bound2 = q(s, r * r) * sys2;
  long box = static_cast<long>(std::ceil(std::sqrt(bound2.to_double()) * 1000)) + 1;
  std::vector<VEdge> out;
  for (const auto& e : veering_edges_in_box(s, q(s, box, 1000), q(s, box, 1000)))
    if (!(bound2 < norm2(e.hol()))) out.push_back(e);
  return out;
}

std::vector<PointKey> keys(const FixReport& r) {
  std::vector<PointKey> k;
  for (const auto& p : r.points) k.push_back(p.key);
  return k;
}

// 1. torus exact counts
Outcome torus_counts() {
  auto [s, f] = torus_from_matrix(2, 1, 1, 1);
  Check c;
  const int expected[] = {1, 5, 16, 45};
  std::ostringstream totals;
  double slowest = 0;
  for (int n = 1; n <= 4; ++n) {
    auto t0 = Clock::now();
    AffineAutomorphism g = f.power(n);
    FixReport r = count_fixed_points(g);
    FixReport o = oracle_count_fixed_points(g, complete_to_section(s, {}));
    double dt = seconds_since(t0);
    slowest = std::max(slowest, dt);
    totals << (n > 1 ? " " : "") << r.total;
    c.require(r.total == expected[n - 1], "total of M^" + std::to_string(n));
    c.require(keys(r) == keys(o), "cross-check of M^" + std::to_string(n));
    c.require(dt < 10, "M^" + std::to_string(n) + " took over 10 s");
  }
  std::ostringstream d;
  d << "totals " << totals.str() << " (expected 1 5 16 45), slowest run " << std::fixed << std::setprecision(2) << slowest
    << " s";
  if (!c.ok) d << "; " << c.note.str();
  return {c.ok, d.str()};
}

// 2. fundamental-lemma and oracle sets agree
Outcome oracle_equivalence() {
  auto t0 = Clock::now();
  Check c;
  int compared = 0;
  for (const auto& cs : corpus()) {
    Section T = complete_to_section(cs.s, {});
    for (const auto& [name, f] : cs.maps) {
      FixReport r = count_fixed_points(f);
      FixReport o = oracle_count_fixed_points(f, T);
      c.require(keys(r) == keys(o), cs.name + " " + name);
      ++compared;
    }
  }
  NonoverlappedExample ex = nonoverlapped_example();
  Section T = complete_to_section(ex.surface, {});
  std::vector<PointKey> base = keys(count_fixed_points(ex.f));
  for (int n = 0; n <= 5; ++n) {
    FixReport o = oracle_count_fixed_points(twist_composite(ex.f, ex.alpha, n), T);
    c.require(keys(o) == base, "twist member n = " + std::to_string(n));
    ++compared;
  }
  double dt = seconds_since(t0);
  c.require(dt < 120, "over 2 min");
  std::ostringstream d;
  d << compared << " maps with identical exact fixed-point sets, " << std::fixed << std::setprecision(1) << dt << " s";
  if (!c.ok) d << "; " << c.note.str();
  return {c.ok, d.str()};
}

// 3. i/k <= #Fix in the rectangle <= i
Outcome rectangle_sandwich() {
  Check c;
  std::ostringstream d;
  int checked = 0;
  for (const auto& cs : corpus()) {
    auto edges = short_edges(*cs.s, 5);
    d << cs.name << " " << edges.size() << " edges; ";
    for (const auto& [name, f] : cs.maps)
      for (const auto& e : edges) {
        auto R = is_veering_edge(*cs.s, e.fwd);
        c.require(R.has_value(), "enumerated edge is not veering");
        if (!R) continue;
        int i = intersection_number(e, image_edge(f.map(), e));
        int n = static_cast<int>(fixed_points_in_rectangle(f, e).size());
        c.require(i <= R->degree * n && n <= i, cs.name + " " + name);
        ++checked;
      }
  }
  d << checked << " (edge, map) pairs";
  if (!c.ok) d << "; " << c.note.str();
  return {c.ok, d.str()};
}

// 4. index sum equals the Lefschetz number
Outcome lefschetz() {
  Check c;
  std::ostringstream d;
  for (const auto& cs : corpus())
    for (const auto& [name, f] : cs.maps) {
      FixReport r = count_fixed_points(f);
      int L = lefschetz_number(f);
      c.require(r.indices_known && r.lefschetz == L, cs.name + " " + name);
      d << cs.name << " " << name << ": " << r.lefschetz << "/" << L << "; ";
    }
  std::string s = d.str();
  if (!c.ok) s += c.note.str();
  return {c.ok, s};
}

// 5. i(s1, s2) <= i(P+, P-) <= (9 chi)^2 i(s1, s2)
Outcome pocket_sandwich() {
  Check c;
  std::ostringstream d;
  for (const auto& cs : corpus()) {
    long chi = cs.s->punctured_euler_characteristic();
    long factor = 81 * chi * chi;
    std::vector<std::pair<int, int>> pairs;
    std::vector<VEdge> edges;
    for (long r = 5; pairs.size() < 100 && r <= 40; r *= 2) {
      edges = short_edges(*cs.s, r);
      pairs.clear();
      for (std::size_t i = 0; i < edges.size(); ++i)
        for (std::size_t j = i + 1; j < edges.size(); ++j)
          if (edges_cross(edges[i], edges[j])) pairs.emplace_back(i, j);
    }
    // pairs of small rectangles first
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto& a, const auto& b) { return a.first + a.second < b.first + b.second; });
    if (pairs.size() > 120) pairs.resize(120);
    long worst = 0;
    for (auto [i, j] : pairs) {
      const VEdge &a = edges[i], &b = edges[j];
      Pocket P = edge_order(a, b) == Order::Above ? pocket(cs.s, a, b) : pocket(cs.s, b, a);
      long base = intersection_number(a, b);
      c.require(base <= P.intersection && P.intersection <= factor * base, cs.name + " pocket");
      if (base > 0) worst = std::max(worst, static_cast<long>(P.intersection / base));
    }
    c.require(pairs.size() >= 100, cs.name + " has fewer than 100 crossing pairs");
    d << cs.name << " " << pairs.size() << " pairs (factor " << factor << ", max ratio " << worst << "); ";
  }
  std::string s = d.str();
  if (!c.ok) s += c.note.str();
  return {c.ok, s};
}

// 6. a degree-k rectangle forces annular distance >= 2k
Outcome degree_distance() {
  auto [s, f] = torus_from_matrix(3, 2, 1, 1);
  Check c;
  std::ostringstream d;
  d << "[[3,2],[1,1]]:";
  int seen = 0;
  for (const auto& e : veering_edges_in_box(*s, q(*s, 2), q(*s, 2))) {
    auto R = is_veering_edge(*s, e.fwd);
    if (!R || R->degree < 2) continue;
    c.require(R->witness.has_value(), "degree >= 2 without a cylinder");
    if (!R->witness) continue;
    ProjectionEstimate p = lamination_distance(f, *R->witness);
    c.require(p.status == EstimateStatus::Stabilized, "projection did not stabilize");
    c.require(p.value >= 2 * R->degree, "d < 2k");
    d << " k=" << R->degree << " d=" << p.value;
    ++seen;
  }
  c.require(seen >= 1, "no rectangle of degree 2 or 3");
  std::string out = d.str();
  if (!c.ok) out += "; " + c.note.str();
  return {c.ok, out};
}

// 7. twisting along the nonoverlapped annulus
Outcome twist_family() {
  NonoverlappedExample ex = nonoverlapped_example();
  std::vector<FamilyMember> fam;
  for (int n = 0; n <= 5; ++n)
    fam.push_back({"f.t^" + std::to_string(n), twist_composite(ex.f, ex.alpha, n), std::nullopt, ex.alpha, n, ex.f});
  auto rows = coarse_table(fam, 8);
  Check c;
  std::ostringstream d;
  d << std::fixed << std::setprecision(3);
  for (std::size_t n = 0; n < rows.size(); ++n) {
    const TableRow& r = rows[n];
    c.require(!r.failed, "row " + r.id + " failed: " + r.error);
    d << "n=" << n << " (" << r.total << ", " << r.log_stretch << ", " << r.annular_term << ") ";
    if (n == 0) continue;
    const TableRow& p = rows[n - 1];
    c.require(r.total == p.total, "totals change");
    c.require(r.log_stretch > p.log_stretch, "stretch does not increase");
    c.require(r.annular_term >= p.annular_term - 1, "annular term drops by more than 1");
  }
  c.require(rows.back().annular_term > rows.front().annular_term, "annular term does not grow");
  std::string out = d.str();
  if (!c.ok) out += "; " + c.note.str();
  return {c.ok, out};
}

// 8. log #Fix(f^n) / (n log lambda) in [0.7, 1]
Outcome asymptotics() {
  Check c;
  std::ostringstream d;
  d << std::fixed << std::setprecision(4);
  auto run = [&](const std::string& name, const AffineAutomorphism& f) {
    double ll = std::log(f.lambda().to_double());
    d << name << ":";
    for (int n = 3; n <= 6; ++n) {
      AffineAutomorphism g = f.power(n);
      int total = count_fixed_points(g).total;
      long bound = markov_upper_bound(g).upper_bound;
      double ratio = std::log(static_cast<double>(total)) / (n * ll);
      c.require(ratio >= 0.7 && ratio <= 1.0, name + " ratio at n = " + std::to_string(n));
      c.require(total <= bound, name + " Markov bound at n = " + std::to_string(n));
      d << " n=" << n << " " << total << "/" << bound << " " << ratio;
    }
    d << "; ";
  };
  auto [s, m] = torus_from_matrix(2, 1, 1, 1);
  run("torus", m);
  run("genus 2", nonoverlapped_example().f);
  std::string out = d.str();
  if (!c.ok) out += c.note.str();
  return {c.ok, out};
}

// 9. layered triangulations of the RL torus bundles
Outcome tetrahedra() {
  auto [s, f] = torus_from_matrix(2, 1, 1, 1);
  Check c;
  std::ostringstream d;
  for (int n = 1; n <= 2; ++n) {
    AffineAutomorphism g = f.power(n);
    Layering L = mapping_torus_layering(g, f_section(g, complete_to_section(s, {})));
    c.require(static_cast<int>(L.tets.size()) == 2 * n, "tetrahedron count");
    c.require(L.closed(), "gluing table not closed");
    d << (n == 1 ? "RL" : "(RL)^2") << ": " << L.tets.size() << " tetrahedra, " << (L.closed() ? "closed" : "open")
      << "; ";
  }
  std::string out = d.str();
  if (!c.ok) out += c.note.str();
  return {c.ok, out};
}

// 10. randomized property suites
Outcome property_suites() {
  auto t0 = Clock::now();
  Check c;
  std::mt19937_64 rng(20240611);
  std::ostringstream d;

  auto k = RealNumberField::create(Polynomial::parse("x^3 - x - 1"), {Rational(1), Rational(2)});
  std::uniform_int_distribution<int> num(-30, 30), den(1, 12);
  auto rnd = [&] {
    std::vector<Rational> co;
    for (int i = 0; i < 3; ++i) {
      Rational r(num(rng), den(rng));
      r.canonicalize();
      co.push_back(r);
    }
    return k->from_coeffs(co);
  };
  for (int trial = 0; trial < 10000; ++trial) {
    auto a = rnd(), b = rnd(), e = rnd();
    c.require(((a + b) + e) == (a + (b + e)), "associativity");
    c.require((a * (b + e)) == (a * b + a * e), "distributivity");
    c.require((a * b) == (b * a), "commutativity");
    if (!a.is_zero()) c.require((a * (k->one() / a)) == k->one(), "inverse");
  }
  d << "10000 ring cases, ";

  auto surfaces = corpus();
  int flips = 0;
  for (int walk = 0; walk < 1000; ++walk) {
    const CorpusSurface& cs = surfaces[walk % surfaces.size()];
    Section T = complete_to_section(cs.s, {});
    for (int step = 0; step < 6; ++step) {
      std::vector<std::pair<int, bool>> moves;
      for (int i = 0; i < T.size(); ++i) {
        if (T.upward_flippable(i)) moves.emplace_back(i, true);
        if (T.downward_flippable(i)) moves.emplace_back(i, false);
      }
      c.require(!moves.empty(), "section with no flips");
      if (moves.empty()) break;
      auto [i, up] = moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)];
      Section U = up ? T.flip_up(i) : T.flip_down(i);
      auto j = U.find(T.flipped_edge(i));
      c.require(U.size() == cs.s->section_size(), "section size changes");
      c.require(j.has_value() && (up ? U.flip_down(*j) : U.flip_up(*j)) == T, "flip is not an involution");
      T = U;
      ++flips;
    }
  }
  d << "1000 flip walks (" << flips << " flips), ";

  int pairs = 0;
  for (std::size_t si = 0; si < surfaces.size(); ++si) {
    const CorpusSurface& cs = surfaces[si];
    const AffineAutomorphism& f = cs.maps.front().second;
    auto edges = short_edges(*cs.s, 5);
    std::vector<VEdge> images;
    for (const auto& e : edges) images.push_back(image_edge(f.map(), e));
    std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
    int quota = si + 1 == surfaces.size() ? 1000 - pairs : 1000 / static_cast<int>(surfaces.size());
    for (int t = 0; t < quota; ++t) {
      // a segment overlaps itself, so the pair is of distinct edges
      std::size_t a = pick(rng), b = pick(rng);
      while (b == a) b = pick(rng);
      int iab = intersection_number(edges[a], edges[b]);
      c.require(iab == intersection_number(edges[b], edges[a]), cs.name + " symmetry");
      c.require(iab == intersection_number(images[a], images[b]), cs.name + " equivariance");
      ++pairs;
    }
  }
  d << pairs << " intersection pairs, ";
  double dt = seconds_since(t0);
  c.require(dt < 600, "over 10 min");
  d << std::fixed << std::setprecision(1) << dt << " s";
  std::string out = d.str();
  if (!c.ok) out += "; " + c.note.str();
  return {c.ok, out};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"torus exact counts", torus_counts},
      {"oracle equivalence", oracle_equivalence},
      {"rectangle sandwich", rectangle_sandwich},
      {"Lefschetz identity", lefschetz},
      {"pocket sandwich", pocket_sandwich},
      {"degree-annulus bound", degree_distance},
      {"twist family", twist_family},
      {"fixed-point growth", asymptotics},
      {"tetrahedron counts", tetrahedra},
      {"property suites", property_suites},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << std::setw(2) << i + 1 << " " << criteria[i].first << " ["
              << std::fixed << std::setprecision(1) << seconds_since(t0) << " s]: " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
