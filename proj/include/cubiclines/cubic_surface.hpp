#pragma once

#include <array>
#include <vector>

#include <gmpxx.h>

namespace cubiclines {

using Exponent = std::array<int, 4>;

inline constexpr int kCubicMonomialCount = 20;

// Graded-lex order: x0^3, x0^2 x1, x0^2 x2, x0^2 x3, x0 x1^2, ..., x2 x3^2, x3^3.
const std::array<Exponent, kCubicMonomialCount>& cubic_monomials();
int monomial_index(const Exponent& e);

using CubicCoeffs = std::array<mpz_class, kCubicMonomialCount>;

struct CubicSurface {
  long p = 0;
  int precision = 0;  // sampling precision N, metadata only
  CubicCoeffs coeffs;
};

// Validates p and that some coefficient is nonzero.
CubicSurface make_surface(long p, int precision, const CubicCoeffs& coeffs);

CubicSurface fermat_surface(long p);
// x0x1x2 + x0x1x3 + x0x2x3 + x1x2x3
CubicSurface cayley_surface(long p);

mpz_class evaluate(const CubicCoeffs& f, const std::array<mpz_class, 4>& x);

// Coefficients of f(A y), i.e. x_v = sum_w A[v][w] y_w.
using IntMatrix4 = std::array<std::array<mpz_class, 4>, 4>;
CubicCoeffs change_coordinates(const CubicCoeffs& f, const IntMatrix4& a);

// Divide out the largest power of p dividing every coefficient.
CubicSurface primitive_part(const CubicSurface& s);

// A polynomial as a list of (coefficient, linear-factor indices) terms,
// e.g. 5 x0 x2^2 -> (5, {0, 2, 2}). Used to restrict forms to lines.
template <class T>
struct FormTerm {
  T coefficient;
  std::vector<int> factors;
};

template <class T>
std::vector<FormTerm<T>> cubic_terms(const std::array<T, kCubicMonomialCount>& f) {
  std::vector<FormTerm<T>> out;
  const auto& mons = cubic_monomials();
  for (int m = 0; m < kCubicMonomialCount; ++m) {
    if (f[m] == 0) continue;
    FormTerm<T> term{f[m], {}};
    for (int v = 0; v < 4; ++v)
      for (int e = 0; e < mons[m][v]; ++e) term.factors.push_back(v);
    out.push_back(std::move(term));
  }
  return out;
}

// Coefficients of f(A y), i.e. x_v = sum_w A[v][w] y_w, over any ring.
template <class T>
std::array<T, kCubicMonomialCount> substitute_linear(const std::array<T, kCubicMonomialCount>& f,
                                                     const std::array<std::array<T, 4>, 4>& a) {
  std::array<T, kCubicMonomialCount> out;
  for (auto& c : out) c = 0;
  for (const auto& term : cubic_terms(f)) {
    const int u = term.factors[0], v = term.factors[1], w = term.factors[2];
    for (int i = 0; i < 4; ++i) {
      if (a[u][i] == 0) continue;
      for (int j = 0; j < 4; ++j) {
        if (a[v][j] == 0) continue;
        const T partial = term.coefficient * a[u][i] * a[v][j];
        for (int k = 0; k < 4; ++k) {
          Exponent e{0, 0, 0, 0};
          ++e[i];
          ++e[j];
          ++e[k];
          out[monomial_index(e)] += partial * a[w][k];
        }
      }
    }
  }
  return out;
}

// Terms of the partial derivative with respect to x_w.
template <class T>
std::vector<FormTerm<T>> derivative_terms(const std::vector<FormTerm<T>>& terms, int w) {
  std::vector<FormTerm<T>> out;
  for (const auto& term : terms) {
    int multiplicity = 0;
    for (int v : term.factors) multiplicity += v == w ? 1 : 0;
    if (multiplicity == 0) continue;
    FormTerm<T> d{term.coefficient * multiplicity, {}};
    bool removed = false;
    for (int v : term.factors) {
      if (v == w && !removed) {
        removed = true;
        continue;
      }
      d.factors.push_back(v);
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace cubiclines
