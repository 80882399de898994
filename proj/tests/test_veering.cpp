#include "doctest.h"
#include "veerfix/veering.hpp"

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

int count_up(const Section& T) {
  int n = 0;
  for (int i = 0; i < T.size(); ++i) n += T.upward_flippable(i);
  return n;
}
int count_down(const Section& T) {
  int n = 0;
  for (int i = 0; i < T.size(); ++i) n += T.downward_flippable(i);
  return n;
}

}  // namespace

TEST_CASE("sections of the eigen torus") {
  auto [s, f] = torus_from_matrix(2, 1, 1, 1);
  Section T = complete_to_section(s, {});
  CHECK(T.size() == 3);
  CHECK(T.faces().size() == 2);
  // Farey structure: one edge flips up, one flips down
  CHECK(count_up(T) == 1);
  CHECK(count_down(T) == 1);
  for (int i = 0; i < T.size(); ++i) {
    if (!T.upward_flippable(i)) {
      CHECK(kind_of([&] { T.flip_up(i); }) == ErrorKind::NotFlippable);
      continue;
    }
    Section U = T.flip_up(i);
    CHECK(U.size() == 3);
    VEdge ne = T.flipped_edge(i);
    auto j = U.find(ne);
    REQUIRE(j);
    CHECK(U.downward_flippable(*j));
    CHECK(U.flip_down(*j) == T);
    CHECK(edge_order(T.edges()[i], ne) == Order::Below);
    CHECK(edge_order(ne, T.edges()[i]) == Order::Above);
    Section::from_edges(s, U.edges(), true);
  }
  // edges of one section are pairwise disjoint
  for (int i = 0; i < T.size(); ++i)
    for (int j = 0; j < T.size(); ++j)
      CHECK(edge_order(T.edges()[i], T.edges()[j]) == (i == j ? Order::Equal : Order::Disjoint));
  // completing a section returns it
  CHECK(complete_to_section(s, T.edges()) == T);
}

TEST_CASE("extremal sections through an edge") {
  auto [s, f] = torus_from_matrix(2, 1, 1, 1);
  Section T = complete_to_section(s, {});
  for (const auto& e : T.edges()) {
    Section P = t_plus(s, e), M = t_minus(s, e);
    auto ip = P.find(e), im = M.find(e);
    REQUIRE(ip);
    REQUIRE(im);
    for (int i = 0; i < P.size(); ++i)
      if (i != *ip) CHECK_FALSE(P.upward_flippable(i));
    for (int i = 0; i < M.size(); ++i)
      if (i != *im) CHECK_FALSE(M.downward_flippable(i));
    CHECK(section_leq(M, P));
  }
}

TEST_CASE("f maps veering edges to veering edges") {
  auto [s, f] = torus_from_matrix(2, 1, 1, 1);
  Section T = complete_to_section(s, {});
  for (const auto& e : T.edges()) {
    VEdge fe = image_edge(f.map(), e);
    CHECK(is_veering_edge(*s, fe.fwd).has_value());
    CHECK(fe.hol() == f.derivative() * e.hol());
  }
  auto V = veering_edges_in_box(*s, s->field()->from_rational(4), s->field()->from_rational(4));
  for (std::size_t i = 0; i < V.size() && i < 12; ++i)
    for (std::size_t j = i + 1; j < V.size() && j < 12; ++j)
      CHECK(intersection_number(image_edge(f.map(), V[i]), image_edge(f.map(), V[j])) == intersection_number(V[i], V[j]));
}

TEST_CASE("f-sections and the layered mapping torus") {
  auto [s, f] = torus_from_matrix(2, 1, 1, 1);
  Section T0 = complete_to_section(s, {});
  Section T = f_section(f, T0);
  CHECK(section_leq(image_section(f.map(), T), T));
  CHECK(f_section(f, T) == T);
  Layering L = mapping_torus_layering(f, T);
  CHECK(L.tets.size() == 2);
  CHECK(L.closed());
  auto f2 = f.power(2);
  Section T2 = f_section(f2, T0);
  Layering L2 = mapping_torus_layering(f2, T2);
  CHECK(L2.tets.size() == 4);
  CHECK(L2.closed());
  // on the torus no rectangle is folded enough to matter
  CHECK(annular_avoiding_f_section(f, T0) == T);
}

TEST_CASE("pockets") {
  auto [s, f] = torus_from_matrix(2, 1, 1, 1);
  Section T = complete_to_section(s, {});
  int i = -1;
  for (int k = 0; k < T.size(); ++k)
    if (T.upward_flippable(k)) i = k;
  REQUIRE(i >= 0);
  VEdge lo = T.edges()[i], hi = T.flipped_edge(i);
  Pocket P = pocket(s, hi, lo);
  CHECK(P.flips == 1);
  CHECK(P.intersection == intersection_number(hi, lo));
  CHECK(P.intersection == 1);
  CHECK(kind_of([&] { pocket(s, lo, hi); }) == ErrorKind::WrongOrder);
  int other = (i + 1) % T.size();
  CHECK(kind_of([&] { pocket(s, lo, T.edges()[other]); }) == ErrorKind::NotCrossing);
  // a deeper pocket: an edge against its image
  VEdge e = T.edges()[0];
  VEdge fe = image_edge(f.map(), e);
  if (edges_cross(e, fe)) {
    Pocket Q = edge_order(e, fe) == Order::Above ? pocket(s, e, fe) : pocket(s, fe, e);
    int base = intersection_number(e, fe);
    CHECK(Q.intersection >= base);
    CHECK(Q.intersection <= s->section_size() * s->section_size() * base);
  }
}
