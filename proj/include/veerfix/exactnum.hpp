#pragma once

// Exact arithmetic in a real number field Q(g), where g is a real root of an
// irreducible integer polynomial isolated by a rational interval.

#include <gmpxx.h>

#include <boost/container/small_vector.hpp>

#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "veerfix/error.hpp"

namespace veerfix {

using Rational = mpq_class;
using Integer = mpz_class;

/// Dense univariate polynomial over Q, coefficients from low to high degree.
/// Trailing zeros are stripped; the zero polynomial has no coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Rational coeff(int i) const;
  const Rational& leading() const { return coeffs_.back(); }

  Rational operator()(const Rational& x) const;
  Polynomial derivative() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

  /// Euclidean division; throws DivisionByZero for a zero divisor.
  static void divmod(const Polynomial& a, const Polynomial& b, Polynomial& q, Polynomial& r);
  static Polynomial gcd(const Polynomial& a, const Polynomial& b);

  /// Scales to a primitive integer polynomial with positive leading coefficient.
  std::vector<Integer> primitive_integer() const;

  /// Renders with variable `var`, e.g. "x^2 - x - 1".
  std::string to_string(char var = 'x') const;
  static Polynomial parse(std::string_view text, char var = 'x');

 private:
  void normalize();
  std::vector<Rational> coeffs_;
};

/// Irreducibility over Q for small degree (squarefree test, distinct-degree
/// patterns modulo small primes, Kronecker search as a last resort).
bool is_irreducible(const Polynomial& p);

/// Number of distinct real roots in the half-open interval (lo, hi], via Sturm.
int count_real_roots(const Polynomial& p, const Rational& lo, const Rational& hi);

struct RationalInterval {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const RationalInterval& o) const { return lo <= o.lo && o.hi <= hi; }
};

class FieldElement;

/// Q(g) with a distinguished real embedding. Immutable after creation; the
/// lazily refined root intervals are guarded by a mutex.
class RealNumberField : public std::enable_shared_from_this<RealNumberField> {
 public:
  static std::shared_ptr<const RealNumberField> create(const Polynomial& minpoly,
                                                       const RationalInterval& root);
  /// The field Q, presented by x - 1 with root interval [0, 2].
  static std::shared_ptr<const RealNumberField> rationals();

  int degree() const { return minpoly_.degree(); }
  const Polynomial& minpoly() const { return minpoly_; }
  const RationalInterval& root_interval() const { return root_; }

  /// Isolating interval for g of width at most 2^-bits.
  RationalInterval root_approx(unsigned bits) const;

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement gen() const;
  FieldElement from_rational(const Rational& r) const;
  FieldElement from_coeffs(const std::vector<Rational>& coeffs) const;
  /// Parses "c0 + c1*g + c2*g^2 ..." with rational coefficients "p/q".
  FieldElement parse(std::string_view text) const;

  bool same_as(const RealNumberField& other) const;

 private:
  RealNumberField(Polynomial minpoly, RationalInterval root);
  Polynomial minpoly_;
  RationalInterval root_;
  mutable std::mutex mu_;
  mutable std::vector<RationalInterval> refined_;  // refined_[i] has width <= 2^-(32*(i+1))
};

using FieldPtr = std::shared_ptr<const RealNumberField>;

/// An element of Q(g), stored as coefficients of 1, g, ..., g^(d-1).
class FieldElement {
 public:
  using Coeffs = boost::container::small_vector<Rational, 4>;

  FieldElement() = default;
  FieldElement(FieldPtr field, Coeffs coeffs);

  const FieldPtr& field() const { return field_; }
  const Coeffs& coeffs() const { return coeffs_; }
  bool valid() const { return field_ != nullptr; }

  bool is_zero() const;
  bool is_rational() const;
  /// Only meaningful when is_rational().
  Rational rational_value() const;

  int sign() const;
  RationalInterval approx(unsigned bits) const;
  double to_double() const;
  std::string to_string() const;

  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement& operator/=(const FieldElement& o);
  FieldElement& operator*=(const Rational& r);

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
  friend FieldElement operator*(FieldElement a, const Rational& r) { return a *= r; }
  friend FieldElement operator*(const Rational& r, FieldElement a) { return a *= r; }

  FieldElement inverse() const;
  FieldElement pow(unsigned n) const;
  FieldElement abs() const { return sign() < 0 ? -*this : *this; }

  /// Exact equality; elements of different fields are never equal.
  friend bool operator==(const FieldElement& a, const FieldElement& b);
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

  /// Order by real value.
  friend int compare(const FieldElement& a, const FieldElement& b);
  friend bool operator<(const FieldElement& a, const FieldElement& b) { return compare(a, b) < 0; }
  friend bool operator>(const FieldElement& a, const FieldElement& b) { return compare(a, b) > 0; }
  friend bool operator<=(const FieldElement& a, const FieldElement& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const FieldElement& a, const FieldElement& b) { return compare(a, b) >= 0; }

  /// Lexicographic order on coefficient vectors; a total order used only as
  /// a deterministic key, unrelated to the real value.
  friend bool key_less(const FieldElement& a, const FieldElement& b);

  std::size_t hash() const;

 private:
  void require_same_field(const FieldElement& o) const;
  FieldPtr field_;
  Coeffs coeffs_;
};

Rational floor_of(const FieldElement& a);
Rational ceil_of(const FieldElement& a);
FieldElement min(const FieldElement& a, const FieldElement& b);
FieldElement max(const FieldElement& a, const FieldElement& b);

/// Re-expresses a in field k: a must be rational or already live in k.
FieldElement coerce(const FieldElement& a, const FieldPtr& k);

std::string rational_to_string(const Rational& r);
Rational parse_rational(std::string_view text);

}  // namespace veerfix
