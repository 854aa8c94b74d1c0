#include "cubiclines/cubic_surface.hpp"

#include <stdexcept>

#include "cubiclines/padic.hpp"

namespace cubiclines {

const std::array<Exponent, kCubicMonomialCount>& cubic_monomials() {
  static const auto table = [] {
    std::array<Exponent, kCubicMonomialCount> t{};
    int n = 0;
    for (int a = 3; a >= 0; --a)
      for (int b = 3 - a; b >= 0; --b)
        for (int c = 3 - a - b; c >= 0; --c) t[n++] = {a, b, c, 3 - a - b - c};
    return t;
  }();
  return table;
}

int monomial_index(const Exponent& e) {
  const auto& mons = cubic_monomials();
  for (int m = 0; m < kCubicMonomialCount; ++m)
    if (mons[m] == e) return m;
  throw std::invalid_argument("monomial_index: not a cubic monomial");
}

CubicSurface make_surface(long p, int precision, const CubicCoeffs& coeffs) {
  require_odd_prime(p);
  bool nonzero = false;
  for (const auto& c : coeffs) nonzero = nonzero || c != 0;
  if (!nonzero) throw std::invalid_argument("make_surface: all coefficients are zero");
  return CubicSurface{p, precision, coeffs};
}

CubicSurface fermat_surface(long p) {
  CubicCoeffs f;
  for (auto& c : f) c = 0;
  for (int v = 0; v < 4; ++v) {
    Exponent e{0, 0, 0, 0};
    e[v] = 3;
    f[monomial_index(e)] = 1;
  }
  return make_surface(p, 0, f);
}

CubicSurface cayley_surface(long p) {
  CubicCoeffs f;
  for (auto& c : f) c = 0;
  for (int skip = 0; skip < 4; ++skip) {
    Exponent e{1, 1, 1, 1};
    e[skip] = 0;
    f[monomial_index(e)] = 1;
  }
  return make_surface(p, 0, f);
}

mpz_class evaluate(const CubicCoeffs& f, const std::array<mpz_class, 4>& x) {
  mpz_class total = 0;
  const auto& mons = cubic_monomials();
  for (int m = 0; m < kCubicMonomialCount; ++m) {
    if (f[m] == 0) continue;
    mpz_class term = f[m];
    for (int v = 0; v < 4; ++v)
      for (int e = 0; e < mons[m][v]; ++e) term *= x[v];
    total += term;
  }
  return total;
}

CubicCoeffs change_coordinates(const CubicCoeffs& f, const IntMatrix4& a) { return substitute_linear(f, a); }

CubicSurface primitive_part(const CubicSurface& s) {
  int v = kInfiniteValuation;
  for (const auto& c : s.coeffs)
    if (c != 0) v = std::min(v, valuation(c, s.p));
  if (v == kInfiniteValuation) throw std::invalid_argument("primitive_part: zero form");
  CubicSurface out = s;
  if (v == 0) return out;
  for (auto& c : out.coeffs) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), prime_power(s.p, v).get_mpz_t());
  return out;
}

}  // namespace cubiclines
