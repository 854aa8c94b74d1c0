#pragma once

#include <vector>

#include "cubiclines/exact_poly.hpp"
#include "cubiclines/padic.hpp"

namespace cubiclines {

/// Univariate polynomial with exact integer coefficients, viewed over Q_p.
class PadicPolynomial {
 public:
  PadicPolynomial(long p, IntPoly coefficients);

  long prime() const { return p_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const IntPoly& coefficients() const { return coeffs_; }
  const mpz_class& coefficient(int i) const { return coeffs_[static_cast<std::size_t>(i)]; }

 private:
  long p_;
  IntPoly coeffs_;
};

// A Newton polygon edge of slope numerator/denominator (reduced,
// denominator > 0). Its `length` roots have valuation -slope.
struct NewtonSegment {
  long numerator = 0;
  long denominator = 1;
  int length = 0;
};

struct NewtonPolygon {
  std::vector<NewtonSegment> segments;
};

// Lower convex hull of (i, v_p(c_i)) over the nonzero coefficients.
NewtonPolygon newton_polygon(const PadicPolynomial& f);

mpz_class discriminant(const PadicPolynomial& f);

// Number of distinct roots in Q_p.
long count_roots(const PadicPolynomial& f);
// Number of distinct roots in the quadratic extension `ext`.
long count_roots(const PadicPolynomial& f, const ExtensionDescriptor& ext);

struct FactorPattern {
  int linear = 0;
  int quadratic = 0;
  friend bool operator==(const FactorPattern&, const FactorPattern&) = default;
};

// Counts of linear and quadratic irreducible factors over Q_p.
FactorPattern factor_pattern(const PadicPolynomial& f);

// Rational lines on the blow-up surface of a sextic with this pattern:
// 2l + q + l(l-1)/2.
int line_count_from_pattern(const FactorPattern& pattern);

}  // namespace cubiclines
