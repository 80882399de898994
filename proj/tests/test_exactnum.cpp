#include "doctest.h"
#include "veerfix/exactnum.hpp"

#include <random>

using namespace veerfix;

namespace {

FieldPtr golden() {
  return RealNumberField::create(Polynomial::parse("x^2 - x - 1"), {Rational(1), Rational(2)});
}

// Plain bisection on the polynomial, kept separate from the field's cache.
RationalInterval bisect(const Polynomial& p, Rational lo, Rational hi, const Rational& width) {
  int slo = sgn(p(lo));
  while (hi - lo > width) {
    Rational mid = (lo + hi) / 2;
    if (sgn(p(mid)) == slo)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

}  // namespace

TEST_CASE("field creation") {
  auto k = golden();
  CHECK(k->degree() == 2);
  auto iv = k->gen().approx(20);
  auto ref = bisect(k->minpoly(), 1, 2, Rational(1, 1 << 22));
  CHECK(iv.lo <= ref.hi);
  CHECK(ref.lo <= iv.hi);
  CHECK(k->gen().to_double() == doctest::Approx(1.6180339887));

  auto q = RealNumberField::create(Polynomial::parse("x - 1"), {Rational(0), Rational(2)});
  CHECK(q->degree() == 1);

  auto expect_kind = [](ErrorKind kind, auto&& fn) {
    try {
      fn();
      FAIL("no error raised");
    } catch (const Error& e) {
      CHECK(e.kind() == kind);
    }
  };
  expect_kind(ErrorKind::NotIrreducible,
              [] { RealNumberField::create(Polynomial::parse("x^2 - 1"), {Rational(0), Rational(2)}); });
  expect_kind(ErrorKind::NoRootInInterval,
              [] { RealNumberField::create(Polynomial::parse("x^2 - x - 1"), {Rational(2), Rational(3)}); });
  expect_kind(ErrorKind::MultipleRootsInInterval,
              [] { RealNumberField::create(Polynomial::parse("x^2 - x - 1"), {Rational(-1), Rational(2)}); });
}

TEST_CASE("irreducibility") {
  CHECK(is_irreducible(Polynomial::parse("x^2 - 4*x + 1")));
  CHECK(is_irreducible(Polynomial::parse("x^4 - x^3 - x^2 - x + 1")));
  CHECK(is_irreducible(Polynomial::parse("x^3 - x - 1")));
  CHECK_FALSE(is_irreducible(Polynomial::parse("x^4 + 4")));  // (x^2+2x+2)(x^2-2x+2)
  CHECK_FALSE(is_irreducible(Polynomial::parse("x^4 - 2*x^2 + 1")));  // square
  CHECK_FALSE(is_irreducible(Polynomial::parse("x^6 - 1")));
  CHECK_FALSE(is_irreducible(Polynomial::parse("x^4 + x^2 + 1")));  // cyclotomic product
  // product of two quadratics with no rational roots
  Polynomial a = Polynomial::parse("x^2 - 3*x + 1"), b = Polynomial::parse("x^2 - 5*x + 3");
  CHECK_FALSE(is_irreducible(a * b));
  CHECK(count_real_roots(a * b, -10, 10) == 4);
}

TEST_CASE("arithmetic examples") {
  auto k = golden();
  auto g = k->gen();
  CHECK((g * g) == g + k->one());
  CHECK((g * (g - k->one())) == k->one());
  CHECK((k->one() / g) == g - k->one());
  CHECK(((g - k->one()) * g) == k->one());
  CHECK_THROWS_AS(k->one() / k->zero(), Error);
  auto other = RealNumberField::create(Polynomial::parse("x^2 - 2"), {Rational(1), Rational(2)});
  try {
    (void)(g + other->gen());
    FAIL("no error raised");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::FieldMismatch);
  }
}

TEST_CASE("sign and approx") {
  auto k = golden();
  auto g = k->gen();
  CHECK((g * g - g - k->one()).sign() == 0);
  CHECK((g - k->from_rational(Rational(8, 5))).sign() == 1);
  CHECK((-g).sign() == -1);
  auto iv = g.approx(4);
  CHECK(iv.width() <= Rational(1, 16));
  CHECK(iv.lo < Rational(16181, 10000));
  CHECK(iv.hi > Rational(1618, 1000));
  auto z = k->zero().approx(64);
  CHECK(z.lo == 0);
  CHECK(z.hi == 0);
  auto h = k->from_rational(Rational(3, 2)).approx(10);
  CHECK(h.lo == Rational(3, 2));
  CHECK(h.hi == Rational(3, 2));
  // a tiny nonzero element needs deep refinement
  auto tiny = g.pow(40) - k->parse("102334155*g + 63245986");
  CHECK(tiny.is_zero());
  auto near = g.pow(30) - k->from_rational(1860498);
  CHECK(near.sign() == -1);  // phi^30 = 1860498 - phi^-30
}

TEST_CASE("textual syntax") {
  auto k = golden();
  auto a = k->parse(" 1/2 + 3/4*g ");
  CHECK(a.to_string() == "1/2 + 3/4*g");
  CHECK(k->parse(a.to_string()) == a);
  CHECK(k->parse("-g").to_string() == "-g");
  CHECK(k->parse("g^2") == k->parse("1 + g"));
  CHECK_THROWS_AS(k->parse("1 + + g"), Error);
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK(Polynomial::parse("x^2 - x - 1").to_string() == "x^2 - x - 1");
}

TEST_CASE("ring axioms on random elements") {
  auto k = RealNumberField::create(Polynomial::parse("x^3 - x - 1"), {Rational(1), Rational(2)});
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> num(-30, 30), den(1, 12);
  auto rnd = [&] {
    std::vector<Rational> c;
    for (int i = 0; i < 3; ++i) {
      Rational r(num(rng), den(rng));
      r.canonicalize();
      c.push_back(r);
    }
    return k->from_coeffs(c);
  };
  for (int trial = 0; trial < 10000; ++trial) {
    auto a = rnd(), b = rnd(), c = rnd();
    REQUIRE(((a + b) + c) == (a + (b + c)));
    REQUIRE((a * (b + c)) == (a * b + a * c));
    REQUIRE((a * b) == (b * a));
    if (!a.is_zero()) REQUIRE((a * (k->one() / a)) == k->one());
    if (trial % 50 == 0) {
      int s = (a - b).sign();
      auto iv = (a - b).approx(80);
      if (s > 0) REQUIRE(iv.lo > 0);
      if (s < 0) REQUIRE(iv.hi < 0);
      auto coarse = (a - b).approx(8);
      REQUIRE(coarse.contains(iv));
    }
  }
}
