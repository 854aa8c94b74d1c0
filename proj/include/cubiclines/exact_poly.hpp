#pragma once

#include <vector>

#include <gmpxx.h>

namespace cubiclines {

// Dense univariate polynomials, coefficient of X^i at index i.
using IntPoly = std::vector<mpz_class>;
using RatPoly = std::vector<mpq_class>;

// -1 for the zero polynomial.
int degree(const IntPoly& f);
int degree(const RatPoly& f);
void trim(IntPoly& f);
void trim(RatPoly& f);

IntPoly derivative(const IntPoly& f);
IntPoly multiply(const IntPoly& f, const IntPoly& g);
mpz_class evaluate(const IntPoly& f, const mpz_class& x);
mpq_class evaluate(const RatPoly& f, const mpq_class& x);

RatPoly to_rational(const IntPoly& f);
// f / leading coefficient.
RatPoly monic(const IntPoly& f);

// Determinant of the Sylvester matrix by fraction-free (Bareiss) elimination.
mpz_class resultant(const IntPoly& f, const IntPoly& g);

// (-1)^(d(d-1)/2) Res(f, f') / lc(f); requires deg f >= 1.
mpz_class discriminant(const IntPoly& f);

}  // namespace cubiclines
