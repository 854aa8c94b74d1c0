#pragma once

#include <array>
#include <vector>

#include "cubiclines/cubic_surface.hpp"
#include "cubiclines/padic.hpp"

namespace cubiclines {

// A line is the row space of
//   row 1 = e_i + a e_k + b e_l
//   row 2 = e_j + c e_k + d e_l
// with pivots i < j and free columns k < l.
struct LineChart {
  int i, j, k, l;
};

// Ordered by pivot pair: (0,1), (0,2), (0,3), (1,2), (1,3), (2,3).
const std::array<LineChart, 6>& line_charts();

using LineParams = std::array<mpz_class, 4>;  // a, b, c, d

// Coefficients of s^3, s^2 t, s t^2, t^3 in f(s row1 + t row2).
std::array<mpz_class, 4> restrict_to_line(const CubicSurface& s, const LineChart& chart, const LineParams& params);

// Exhaustive scan of P^3(F_p) for singular points of f mod p.
bool is_smooth_over_fp(const CubicSurface& s);

// Lines of P^3(F_p) on the reduction of s, each counted once.
int fp_line_count(const CubicSurface& s);

// Plucker coordinates p01, p02, p03, p12, p13, p23 scaled so that the first
// coordinate of minimal valuation is 1.
struct PluckerVector {
  std::array<PadicScalar, 6> coords;

  static PluckerVector from_chart(const LineChart& chart, const LineParams& params, long p, int precision);
  // p01 p23 - p02 p13 + p03 p12, at working precision
  PadicScalar relation() const;
  // Coordinates reduced mod p^digits.
  std::array<mpz_class, 6> key(int digits) const;
};

struct FanoOptions {
  int max_depth = 40;
  int max_live = 1000;     // live candidates allowed per level beyond depth 3
  int dedupe_digits = 8;
  bool allow_fast_path = true;
};

struct PadicLineSet {
  std::vector<PluckerVector> lines;
  int max_jacobian_valuation = 0;
  int deepest_level = 0;
};

// General path: chart-wise refinement of the four restriction equations.
PadicLineSet padic_lines(const CubicSurface& s, const FanoOptions& opts = {});

// Number of Q_p-rational lines. Throws DepthExceeded or SingularSurface.
int count_padic_lines(const CubicSurface& s, const FanoOptions& opts = {});

}  // namespace cubiclines
