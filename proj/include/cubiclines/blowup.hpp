#pragma once

#include <string>
#include <vector>

#include "cubiclines/padic_poly.hpp"

namespace cubiclines {

// Whether the six roots of a sextic avoid the E6 hyperplane arrangement.
struct GeneralPositionReport {
  bool disc_nonzero = false;         // theta_i != theta_j
  bool e1_nonzero = false;           // theta_1 + ... + theta_6 != 0
  bool triple_sums_nonzero = false;  // theta_i + theta_j + theta_k != 0, i < j < k
  bool overall = false;
};

/// Product of theta_i + theta_j + theta_k over all 3-subsets of the roots of f.
///
/// Computed exactly from the power sums of the roots: the power sums of the
/// triple sums are read off e_3(exp(t theta_1), ..., exp(t theta_d)) and
/// Newton's identities turn them into the product.
mpq_class triple_sum_product(const IntPoly& f);

GeneralPositionReport general_position_check(const PadicPolynomial& f);

// Rational lines on the blow-up surface S(F). Throws NotInGeneralPosition.
int blowup_line_count(const PadicPolynomial& f);

struct Theorem1Row {
  std::string label;
  IntPoly polynomial;
  FactorPattern expected_pattern;
  int expected_lines = 0;
  GeneralPositionReport position;
  FactorPattern pattern;
  int lines = -1;
  bool pass = false;
  std::string error;
};

struct Theorem1Report {
  long p = 0;
  std::vector<Theorem1Row> rows;
  int passed() const;
  bool all_pass() const { return passed() == static_cast<int>(rows.size()); }
};

// The nine sextics realizing 0, 1, 2, 3, 5, 7, 9, 15 and 27 lines.
std::vector<Theorem1Row> theorem1_polynomials(long p);

Theorem1Report verify_theorem1(long p);

}  // namespace cubiclines
