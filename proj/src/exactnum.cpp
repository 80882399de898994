#include "veerfix/exactnum.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace veerfix {

// ---------------------------------------------------------------------------
// Rationals

std::string rational_to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) fail(ErrorKind::Parse, "empty rational");
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') ++i;
  auto digits = [&](std::size_t from) {
    std::size_t j = from;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    return j;
  };
  std::size_t j = digits(i);
  if (j == i) fail(ErrorKind::Parse, "malformed rational '" + s + "'");
  if (j < s.size()) {
    if (s[j] != '/') fail(ErrorKind::Parse, "malformed rational '" + s + "'");
    std::size_t k = digits(j + 1);
    if (k == j + 1 || k != s.size()) fail(ErrorKind::Parse, "malformed rational '" + s + "'");
  }
  Rational r;
  if (r.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0) fail(ErrorKind::Parse, "malformed rational '" + s + "'");
  if (r.get_den() == 0) fail(ErrorKind::DivisionByZero, "zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

void Polynomial::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational Polynomial::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(coeffs_.size())) return 0;
  return coeffs_[i];
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  std::vector<Rational> d;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d.push_back(coeffs_[i] * static_cast<long>(i));
  return Polynomial(std::move(d));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(c));
}

void Polynomial::divmod(const Polynomial& a, const Polynomial& b, Polynomial& q, Polynomial& r) {
  if (b.is_zero()) fail(ErrorKind::DivisionByZero, "polynomial division by zero");
  std::vector<Rational> rem = a.coeffs_;
  int db = b.degree();
  std::vector<Rational> quo(std::max(0, a.degree() - db + 1));
  for (int k = a.degree(); k >= db; --k) {
    if (rem[k] == 0) continue;
    Rational f = rem[k] / b.leading();
    quo[k - db] = f;
    for (int i = 0; i <= db; ++i) rem[k - db + i] -= f * b.coeffs_[i];
  }
  q = Polynomial(std::move(quo));
  r = Polynomial(std::move(rem));
}

Polynomial Polynomial::gcd(const Polynomial& a, const Polynomial& b) {
  Polynomial x = a, y = b;
  while (!y.is_zero()) {
    Polynomial q, r;
    divmod(x, y, q, r);
    x = std::move(y);
    y = std::move(r);
  }
  if (x.is_zero()) return x;
  Rational lc = x.leading();
  std::vector<Rational> c = x.coeffs_;
  for (auto& v : c) v /= lc;
  return Polynomial(std::move(c));
}

std::vector<Integer> Polynomial::primitive_integer() const {
  Integer l = 1;
  for (const auto& c : coeffs_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  std::vector<Integer> out;
  Integer g = 0;
  for (const auto& c : coeffs_) {
    Rational v = c * l;
    out.push_back(v.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_num_mpz_t());
  }
  if (g == 0) return out;
  if (out.back() < 0) g = -g;
  for (auto& v : out) v /= g;
  return out;
}

std::string Polynomial::to_string(char var) const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Rational& c = coeffs_[i];
    if (c == 0) continue;
    Rational a = ::abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0) {
      os << rational_to_string(a);
      continue;
    }
    if (a != 1) os << rational_to_string(a) << "*";
    os << var;
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

Polynomial Polynomial::parse(std::string_view text, char var) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) fail(ErrorKind::Parse, "empty polynomial");
  std::vector<Rational> coeffs;
  std::size_t i = 0;
  bool first = true;
  while (i < s.size()) {
    int sgn = 1;
    if (s[i] == '+' || s[i] == '-') {
      sgn = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (!first) {
      fail(ErrorKind::Parse, "expected '+' or '-' at offset " + std::to_string(i) + " in '" + s + "'");
    }
    first = false;
    Rational c = 1;
    bool have_coeff = false;
    std::size_t j = i;
    while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '/')) ++j;
    if (j > i) {
      c = parse_rational(s.substr(i, j - i));
      have_coeff = true;
      i = j;
    }
    int power = 0;
    if (i < s.size() && s[i] == '*') {
      if (!have_coeff) fail(ErrorKind::Parse, "dangling '*' in '" + s + "'");
      ++i;
      if (i >= s.size() || s[i] != var) fail(ErrorKind::Parse, "expected variable after '*' in '" + s + "'");
    }
    if (i < s.size() && s[i] == var) {
      ++i;
      power = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::size_t k = i;
        while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
        if (k == i) fail(ErrorKind::Parse, "missing exponent in '" + s + "'");
        power = std::stoi(s.substr(i, k - i));
        i = k;
      }
    } else if (!have_coeff) {
      fail(ErrorKind::Parse, "unexpected character at offset " + std::to_string(i) + " in '" + s + "'");
    }
    if (static_cast<int>(coeffs.size()) <= power) coeffs.resize(power + 1);
    coeffs[power] += sgn * c;
  }
  return Polynomial(std::move(coeffs));
}

// ---------------------------------------------------------------------------
// Irreducibility

namespace {

using ModPoly = std::vector<long>;  // low to high, coefficients in [0, p)

void trim(ModPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

long modinv(long a, long p) {
  long t = 0, nt = 1, r = p, nr = a % p;
  while (nr != 0) {
    long q = r / nr;
    t = t - q * nt;
    std::swap(t, nt);
    r = r - q * nr;
    std::swap(r, nr);
  }
  return (t % p + p) % p;
}

ModPoly mod_rem(ModPoly a, const ModPoly& b, long p) {
  trim(a);
  long inv = modinv(b.back(), p);
  int db = static_cast<int>(b.size()) - 1;
  while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
    int k = static_cast<int>(a.size()) - 1;
    long f = a[k] * inv % p;
    for (int i = 0; i <= db; ++i) a[k - db + i] = ((a[k - db + i] - f * b[i]) % p + p) % p;
    trim(a);
  }
  return a;
}

ModPoly mod_mul(const ModPoly& a, const ModPoly& b, const ModPoly& m, long p) {
  if (a.empty() || b.empty()) return {};
  ModPoly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  return mod_rem(std::move(c), m, p);
}

ModPoly mod_gcd(ModPoly a, ModPoly b, long p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    ModPoly r = mod_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

ModPoly mod_div(ModPoly a, const ModPoly& b, long p) {
  trim(a);
  int db = static_cast<int>(b.size()) - 1;
  long inv = modinv(b.back(), p);
  ModPoly q(std::max<int>(0, static_cast<int>(a.size()) - db), 0);
  while (!a.empty() && static_cast<int>(a.size()) - 1 >= db) {
    int k = static_cast<int>(a.size()) - 1;
    long f = a[k] * inv % p;
    q[k - db] = f;
    for (int i = 0; i <= db; ++i) a[k - db + i] = ((a[k - db + i] - f * b[i]) % p + p) % p;
    trim(a);
  }
  return q;
}

// Degrees of the irreducible factors of a squarefree f over F_p.
std::vector<int> distinct_degree_pattern(ModPoly f, long p) {
  std::vector<int> degs;
  int i = 0;
  ModPoly xp = {0, 1};
  while (static_cast<int>(f.size()) - 1 >= 2 * (i + 1)) {
    ++i;
    // x^(p^i) mod f by repeated p-th powering
    ModPoly acc = mod_rem(xp, f, p);
    ModPoly pw{1};
    {
      ModPoly base = acc;
      long e = p;
      while (e > 0) {
        if (e & 1) pw = mod_mul(pw, base, f, p);
        base = mod_mul(base, base, f, p);
        e >>= 1;
      }
    }
    xp = pw;
    ModPoly h = xp;
    if (h.size() < 2) h.resize(2, 0);
    h[1] = (h[1] - 1 + p) % p;
    trim(h);
    ModPoly g = mod_gcd(f, h, p);
    int dg = static_cast<int>(g.size()) - 1;
    if (dg > 0) {
      for (int k = 0; k < dg / i; ++k) degs.push_back(i);
      f = mod_div(f, g, p);
      xp = mod_rem(xp, f, p);
    }
  }
  int rest = static_cast<int>(f.size()) - 1;
  if (rest > 0) degs.push_back(rest);
  return degs;
}

std::vector<Integer> divisors(Integer n) {
  n = abs(n);
  std::vector<Integer> d;
  for (Integer i = 1; i * i <= n; ++i) {
    if (n % i == 0) {
      d.push_back(i);
      if (i * i != n) d.push_back(n / i);
    }
  }
  return d;
}

bool divides_over_q(const Polynomial& g, const Polynomial& f) {
  Polynomial q, r;
  Polynomial::divmod(f, g, q, r);
  return r.is_zero();
}

// Kronecker's method: search for a factor of degree exactly d.
bool has_factor_of_degree(const std::vector<Integer>& f, int d) {
  std::vector<Rational> fc(f.begin(), f.end());
  Polynomial F(fc);
  std::vector<long> xs;
  for (long k = 0; static_cast<int>(xs.size()) < d + 1; ++k) {
    xs.push_back(k);
    if (k != 0 && static_cast<int>(xs.size()) < d + 1) xs.push_back(-k);
  }
  std::vector<std::vector<Integer>> choices;
  for (long x : xs) {
    Rational v = F(Rational(x));
    if (v == 0) return true;
    std::vector<Integer> ds;
    for (auto& dv : divisors(v.get_num())) {
      ds.push_back(dv);
      ds.push_back(-dv);
    }
    choices.push_back(std::move(ds));
  }
  std::vector<std::size_t> idx(xs.size(), 0);
  while (true) {
    // Lagrange interpolation through (xs[i], choices[i][idx[i]])
    Polynomial g;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      Polynomial term(std::vector<Rational>{Rational(choices[i][idx[i]])});
      for (std::size_t j = 0; j < xs.size(); ++j) {
        if (i == j) continue;
        Rational denom = Rational(xs[i] - xs[j]);
        term = term * Polynomial(std::vector<Rational>{Rational(-xs[j]) / denom, Rational(1) / denom});
      }
      g = g + term;
    }
    if (g.degree() == d) {
      bool integral = std::all_of(g.coeffs().begin(), g.coeffs().end(),
                                  [](const Rational& c) { return c.get_den() == 1; });
      if (integral && divides_over_q(g, F)) return true;
    }
    std::size_t k = 0;
    while (k < idx.size()) {
      if (++idx[k] < choices[k].size()) break;
      idx[k] = 0;
      ++k;
    }
    if (k == idx.size()) break;
  }
  return false;
}

}  // namespace

bool is_irreducible(const Polynomial& p) {
  int n = p.degree();
  if (n < 1) return false;
  if (n == 1) return true;
  if (Polynomial::gcd(p, p.derivative()).degree() > 0) return false;
  std::vector<Integer> f = p.primitive_integer();
  if (f[0] == 0) return false;

  // rational roots
  for (const auto& a : divisors(f[0]))
    for (const auto& b : divisors(f.back()))
      for (int s : {1, -1}) {
        Rational r(s * a, b);
        r.canonicalize();
        if (p(r) == 0) return false;
      }
  if (n <= 3) return true;

  // candidate factor degrees compatible with every modular pattern
  std::set<int> candidates;
  for (int d = 2; d <= n / 2; ++d) candidates.insert(d);
  const long primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73};
  for (long pr : primes) {
    if (candidates.empty()) break;
    Integer lc = f.back() % pr;
    if (lc == 0) continue;
    ModPoly fm;
    for (const auto& c : f) {
      Integer r = c % pr;
      if (r < 0) r += pr;
      fm.push_back(r.get_si());
    }
    ModPoly dfm;
    for (std::size_t i = 1; i < fm.size(); ++i) dfm.push_back(fm[i] * static_cast<long>(i) % pr);
    trim(dfm);
    if (dfm.empty() || mod_gcd(fm, dfm, pr).size() > 1) continue;
    std::vector<int> degs = distinct_degree_pattern(fm, pr);
    std::set<int> sums{0};
    for (int d : degs) {
      std::set<int> next = sums;
      for (int s : sums) next.insert(s + d);
      sums = std::move(next);
    }
    std::set<int> keep;
    for (int d : candidates)
      if (sums.count(d)) keep.insert(d);
    candidates = std::move(keep);
  }
  for (int d : candidates)
    if (has_factor_of_degree(f, d)) return false;
  return true;
}

namespace {

int sign_changes(const std::vector<Polynomial>& seq, const Rational& x) {
  int changes = 0, last = 0;
  for (const auto& s : seq) {
    Rational v = s(x);
    int sg = sgn(v);
    if (sg == 0) continue;
    if (last != 0 && sg != last) ++changes;
    last = sg;
  }
  return changes;
}

}  // namespace

int count_real_roots(const Polynomial& p, const Rational& lo, const Rational& hi) {
  if (p.degree() < 1) return 0;
  Polynomial sq = p;
  Polynomial g = Polynomial::gcd(p, p.derivative());
  if (g.degree() > 0) {
    Polynomial q, r;
    Polynomial::divmod(p, g, q, r);
    sq = q;
  }
  std::vector<Polynomial> seq{sq, sq.derivative()};
  while (!seq.back().is_zero()) {
    Polynomial q, r;
    Polynomial::divmod(seq[seq.size() - 2], seq.back(), q, r);
    if (r.is_zero()) break;
    seq.push_back(Polynomial() - r);
  }
  return sign_changes(seq, lo) - sign_changes(seq, hi);
}

// ---------------------------------------------------------------------------
// RealNumberField

RealNumberField::RealNumberField(Polynomial minpoly, RationalInterval root)
    : minpoly_(std::move(minpoly)), root_(std::move(root)) {}

std::shared_ptr<const RealNumberField> RealNumberField::create(const Polynomial& minpoly,
                                                               const RationalInterval& root) {
  if (minpoly.degree() < 1) fail(ErrorKind::DegenerateInput, "minimal polynomial must be nonconstant");
  for (const auto& c : minpoly.coeffs())
    if (c.get_den() != 1) fail(ErrorKind::DegenerateInput, "minimal polynomial must have integer coefficients");
  if (root.lo > root.hi) fail(ErrorKind::NoRootInInterval, "empty root interval");
  if (!is_irreducible(minpoly)) fail(ErrorKind::NotIrreducible, minpoly.to_string());
  int n = count_real_roots(minpoly, root.lo, root.hi) + (minpoly(root.lo) == 0 ? 1 : 0);
  if (n == 0) fail(ErrorKind::NoRootInInterval, minpoly.to_string());
  if (n > 1) fail(ErrorKind::MultipleRootsInInterval, minpoly.to_string());
  return std::shared_ptr<const RealNumberField>(new RealNumberField(minpoly, root));
}

std::shared_ptr<const RealNumberField> RealNumberField::rationals() {
  static const auto q = create(Polynomial({Rational(-1), Rational(1)}), {Rational(0), Rational(2)});
  return q;
}

bool RealNumberField::same_as(const RealNumberField& other) const {
  if (this == &other) return true;
  if (!(minpoly_ == other.minpoly_)) return false;
  // same polynomial; the embeddings coincide iff the intervals share the root
  RationalInterval a = root_approx(64), b = other.root_approx(64);
  return !(a.hi < b.lo || b.hi < a.lo);
}

RationalInterval RealNumberField::root_approx(unsigned bits) const {
  if (degree() == 1) {
    Rational r = -minpoly_.coeff(0) / minpoly_.coeff(1);
    return {r, r};
  }
  if (bits == 0) return root_;
  std::size_t level = (bits + 31) / 32;
  std::lock_guard<std::mutex> lock(mu_);
  while (refined_.size() < level) {
    RationalInterval cur = refined_.empty() ? root_ : refined_.back();
    Rational target = Rational(1);
    mpz_mul_2exp(target.get_den_mpz_t(), target.get_den_mpz_t(), 32 * (refined_.size() + 1));
    int slo = sgn(minpoly_(cur.lo));
    while (cur.width() > target) {
      Rational mid = (cur.lo + cur.hi) / 2;
      if (sgn(minpoly_(mid)) == slo)
        cur.lo = mid;
      else
        cur.hi = mid;
    }
    refined_.push_back(cur);
  }
  return refined_[level - 1];
}

FieldElement RealNumberField::zero() const { return from_coeffs({}); }
FieldElement RealNumberField::one() const { return from_rational(1); }
FieldElement RealNumberField::gen() const {
  if (degree() == 1) return from_rational(-minpoly_.coeff(0) / minpoly_.coeff(1));
  return from_coeffs({Rational(0), Rational(1)});
}

FieldElement RealNumberField::from_rational(const Rational& r) const { return from_coeffs({r}); }

FieldElement RealNumberField::from_coeffs(const std::vector<Rational>& coeffs) const {
  int d = degree();
  FieldElement::Coeffs c(d);
  // reduce arbitrary-length input modulo the minimal polynomial
  Polynomial p(coeffs);
  if (p.degree() >= d) {
    Polynomial q, r;
    Polynomial::divmod(p, minpoly_, q, r);
    p = r;
  }
  for (int i = 0; i < d; ++i) c[i] = p.coeff(i);
  return FieldElement(shared_from_this(), std::move(c));
}

FieldElement RealNumberField::parse(std::string_view text) const {
  Polynomial p = Polynomial::parse(text, 'g');
  return from_coeffs(p.coeffs());
}

// ---------------------------------------------------------------------------
// FieldElement

FieldElement::FieldElement(FieldPtr field, Coeffs coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {}

void FieldElement::require_same_field(const FieldElement& o) const {
  if (field_.get() != o.field_.get()) {
    if (!field_ || !o.field_ || !field_->same_as(*o.field_))
      fail(ErrorKind::FieldMismatch, "operands belong to different fields");
  }
}

bool FieldElement::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c == 0; });
}

bool FieldElement::is_rational() const {
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

Rational FieldElement::rational_value() const { return coeffs_.empty() ? Rational(0) : coeffs_[0]; }

namespace {

struct Iv {
  Rational lo, hi;
};

Iv iv_mul(const Iv& a, const Iv& b) {
  if (a.lo >= 0 && b.lo >= 0) return {a.lo * b.lo, a.hi * b.hi};
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

// Interval Horner evaluation; inclusion-monotone in the root interval.
Iv eval_interval(const FieldElement::Coeffs& c, const RationalInterval& g) {
  Iv x{g.lo, g.hi};
  Iv acc{c.back(), c.back()};
  for (int i = static_cast<int>(c.size()) - 2; i >= 0; --i) {
    acc = iv_mul(acc, x);
    acc.lo += c[i];
    acc.hi += c[i];
  }
  return acc;
}

}  // namespace

int FieldElement::sign() const {
  if (is_rational()) return sgn(rational_value());
  for (unsigned bits = 32;; bits *= 2) {
    Iv v = eval_interval(coeffs_, field_->root_approx(bits));
    if (v.lo > 0) return 1;
    if (v.hi < 0) return -1;
  }
}

RationalInterval FieldElement::approx(unsigned bits) const {
  if (is_rational()) {
    Rational r = rational_value();
    return {r, r};
  }
  Rational target(1);
  mpz_mul_2exp(target.get_den_mpz_t(), target.get_den_mpz_t(), bits);
  for (unsigned b = std::max(32u, ((bits + 31) / 32) * 32);; b += 32) {
    Iv v = eval_interval(coeffs_, field_->root_approx(b));
    if (v.hi - v.lo <= target) return {v.lo, v.hi};
  }
}

double FieldElement::to_double() const {
  RationalInterval iv = approx(64);
  Rational mid = (iv.lo + iv.hi) / 2;
  return mid.get_d();
}

std::string FieldElement::to_string() const {
  std::vector<Rational> c(coeffs_.begin(), coeffs_.end());
  Polynomial p(c);
  if (p.is_zero()) return "0";
  // ascending order: c0 + c1*g + ...
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i <= p.degree(); ++i) {
    const Rational& v = p.coeffs()[i];
    if (v == 0) continue;
    Rational a = ::abs(v);
    if (first) {
      if (v < 0) os << "-";
    } else {
      os << (v < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0) {
      os << rational_to_string(a);
      continue;
    }
    if (a != 1) os << rational_to_string(a) << "*";
    os << "g";
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

FieldElement FieldElement::operator-() const {
  FieldElement r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  require_same_field(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  require_same_field(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

FieldElement& FieldElement::operator*=(const Rational& r) {
  for (auto& c : coeffs_) c *= r;
  return *this;
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  a.require_same_field(b);
  const int d = a.field_->degree();
  if (d == 1) return FieldElement(a.field_, {a.coeffs_[0] * b.coeffs_[0]});
  if (b.is_rational()) return a * b.coeffs_[0];
  if (a.is_rational()) return b * a.coeffs_[0];
  std::vector<Rational> prod(2 * d - 1);
  for (int i = 0; i < d; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (int j = 0; j < d; ++j) prod[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  const Polynomial& m = a.field_->minpoly();
  // reduce from the top: g^k = g^(k-d) * g^d
  for (int k = 2 * d - 2; k >= d; --k) {
    if (prod[k] == 0) continue;
    Rational f = prod[k] / m.leading();
    for (int i = 0; i < d; ++i) prod[k - d + i] -= f * m.coeff(i);
    prod[k] = 0;
  }
  FieldElement::Coeffs c(prod.begin(), prod.begin() + d);
  return FieldElement(a.field_, std::move(c));
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  *this = *this * o;
  return *this;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) fail(ErrorKind::DivisionByZero, "inverse of zero");
  if (is_rational()) return field_->from_rational(1 / rational_value());
  // extended Euclid: s*a + t*m = 1
  Polynomial a(std::vector<Rational>(coeffs_.begin(), coeffs_.end()));
  Polynomial m = field_->minpoly();
  Polynomial r0 = m, r1 = a, s0, s1(std::vector<Rational>{Rational(1)});
  while (!r1.is_zero()) {
    Polynomial q, r;
    Polynomial::divmod(r0, r1, q, r);
    Polynomial s = s0 - q * s1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  // r0 is a nonzero constant since m is irreducible
  check_internal(r0.degree() == 0, "inverse: gcd with minimal polynomial is not constant");
  Rational c = r0.coeffs()[0];
  std::vector<Rational> out = s0.coeffs();
  for (auto& v : out) v /= c;
  return field_->from_coeffs(out);
}

FieldElement& FieldElement::operator/=(const FieldElement& o) {
  require_same_field(o);
  if (o.is_zero()) fail(ErrorKind::DivisionByZero, "division by zero");
  if (o.is_rational()) return *this *= (1 / o.rational_value());
  *this = *this * o.inverse();
  return *this;
}

FieldElement FieldElement::pow(unsigned n) const {
  FieldElement result = field_->one(), base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  if (a.field_.get() != b.field_.get()) {
    if (!a.field_ || !b.field_ || !a.field_->same_as(*b.field_)) return false;
  }
  return std::equal(a.coeffs_.begin(), a.coeffs_.end(), b.coeffs_.begin(), b.coeffs_.end());
}

int compare(const FieldElement& a, const FieldElement& b) {
  a.require_same_field(b);
  if (a.is_rational() && b.is_rational()) return sgn(a.rational_value() - b.rational_value());
  return (a - b).sign();
}

bool key_less(const FieldElement& a, const FieldElement& b) {
  return std::lexicographical_compare(a.coeffs_.begin(), a.coeffs_.end(), b.coeffs_.begin(), b.coeffs_.end());
}

std::size_t FieldElement::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& c : coeffs_) {
    std::size_t n = mpz_get_ui(c.get_num_mpz_t()) ^ (static_cast<std::size_t>(mpz_sgn(c.get_num_mpz_t())) << 7);
    std::size_t d = mpz_get_ui(c.get_den_mpz_t());
    h ^= n + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= d + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

Rational floor_of(const FieldElement& a) {
  if (a.is_rational()) {
    Rational r = a.rational_value();
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return Rational(f);
  }
  for (unsigned bits = 8;; bits *= 2) {
    RationalInterval iv = a.approx(bits);
    Integer flo, fhi;
    mpz_fdiv_q(flo.get_mpz_t(), iv.lo.get_num_mpz_t(), iv.lo.get_den_mpz_t());
    mpz_fdiv_q(fhi.get_mpz_t(), iv.hi.get_num_mpz_t(), iv.hi.get_den_mpz_t());
    if (flo == fhi) return Rational(flo);
  }
}

FieldElement coerce(const FieldElement& a, const FieldPtr& k) {
  if (a.field().get() == k.get() || (a.field() && a.field()->same_as(*k))) return FieldElement(k, a.coeffs());
  if (!a.is_rational()) fail(ErrorKind::FieldMismatch, "cannot coerce " + a.to_string() + " into another field");
  return k->from_rational(a.rational_value());
}

Rational ceil_of(const FieldElement& a) { return -floor_of(-a); }

FieldElement min(const FieldElement& a, const FieldElement& b) { return a <= b ? a : b; }
FieldElement max(const FieldElement& a, const FieldElement& b) { return a >= b ? a : b; }

}  // namespace veerfix
