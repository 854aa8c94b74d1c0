#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include <boost/multiprecision/cpp_complex.hpp>

#include "cubiclines/blowup.hpp"
#include "cubiclines/errors.hpp"
#include "cubiclines/line_counts.hpp"

using namespace cubiclines;

namespace {

IntPoly from_roots(const std::vector<long>& roots) {
  IntPoly f{1};
  for (long r : roots) f = multiply(f, IntPoly{-r, 1});
  return f;
}

// ---- Resultant route: composed sums via Res_x(F(x), G(y - x)).

// g(y0 - x) as a polynomial in x.
IntPoly reflect_shift(const IntPoly& g, const mpz_class& y0) {
  IntPoly out{0};
  IntPoly power{1};
  const IntPoly lin{y0, -1};
  for (const auto& c : g) {
    IntPoly term = power;
    for (auto& t : term) t *= c;
    if (term.size() > out.size()) out.resize(term.size(), 0);
    for (std::size_t i = 0; i < term.size(); ++i) out[i] += term[i];
    power = multiply(power, lin);
  }
  trim(out);
  return out;
}

// Newton interpolation through (x_i, y_i), x_i = 0..n.
RatPoly interpolate(const std::vector<mpz_class>& values) {
  const int n = static_cast<int>(values.size());
  std::vector<mpq_class> dd(values.begin(), values.end());
  for (int level = 1; level < n; ++level)
    for (int i = n - 1; i >= level; --i) dd[i] = (dd[i] - dd[i - 1]) / level;
  RatPoly out{dd[n - 1]};
  for (int i = n - 2; i >= 0; --i) {
    // out = out * (x - i) + dd[i]
    RatPoly next(out.size() + 1, 0);
    for (std::size_t k = 0; k < out.size(); ++k) {
      next[k + 1] += out[k];
      next[k] -= out[k] * i;
    }
    next[0] += dd[i];
    out = next;
  }
  trim(out);
  return out;
}

IntPoly clear_denominators(const RatPoly& f) {
  mpz_class lcm = 1;
  for (const auto& c : f) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
  IntPoly out;
  for (const auto& c : f) out.push_back(mpz_class(c * lcm));
  return out;
}

struct ResultantRoute {
  mpz_class r3_at_zero;
  mpz_class w_at_zero;
  mpz_class d_at_zero;
};

// For monic f of degree d: R3(0) = prod over ordered triples, W(0) over
// 2 theta_i + theta_k, D(0) = prod 3 theta_i.
ResultantRoute resultant_route(const IntPoly& f) {
  const int d = degree(f);
  std::vector<mpz_class> r2_values;
  for (int y = 0; y <= d * d; ++y) r2_values.push_back(resultant(f, reflect_shift(f, y)));
  const RatPoly r2 = interpolate(r2_values);
  RatPoly r2_neg = r2;
  for (std::size_t i = 1; i < r2_neg.size(); i += 2) r2_neg[i] = -r2_neg[i];
  const IntPoly r2_neg_int = clear_denominators(r2_neg);
  const mpz_class scale = r2_neg_int.back() / mpz_class(r2_neg.back());

  ResultantRoute out;
  out.r3_at_zero = resultant(f, r2_neg_int);
  // undo the integer scaling: Res(f, c g) = c^deg f Res(f, g)
  for (int i = 0; i < d; ++i) mpz_divexact(out.r3_at_zero.get_mpz_t(), out.r3_at_zero.get_mpz_t(), scale.get_mpz_t());

  IntPoly f2(f.size());
  for (int i = 0; i <= d; ++i) f2[i] = f[i] * prime_power(2, d - i);  // 2^d f(x/2)
  out.w_at_zero = resultant(f, reflect_shift(f2, 0));
  out.d_at_zero = f[0] * prime_power(3, d);
  if (d % 2) out.d_at_zero = -out.d_at_zero;
  return out;
}

// ---- High precision numeric roots with inclusion radii.

namespace mp = boost::multiprecision;
using Complex = mp::cpp_complex_50;
using Real = mp::cpp_bin_float_50;

struct NumericRoots {
  std::vector<Complex> z;
  std::vector<Real> radius;
};

NumericRoots numeric_roots(const IntPoly& f) {
  const int d = degree(f);
  std::vector<Complex> c;
  for (const auto& x : f) c.emplace_back(Real(x.get_str()));
  auto eval = [&](const Complex& z, Complex& deriv) {
    Complex v = c[d];
    deriv = 0;
    for (int i = d - 1; i >= 0; --i) {
      deriv = deriv * z + v;
      v = v * z + c[i];
    }
    return v;
  };
  NumericRoots out;
  const Complex seed(Real("0.4"), Real("0.9"));
  Complex w = 1;
  for (int i = 0; i < d; ++i, w *= seed) out.z.push_back(w);
  // Durand-Kerner
  for (int iter = 0; iter < 2000; ++iter) {
    Real change = 0;
    for (int i = 0; i < d; ++i) {
      Complex deriv;
      Complex num = eval(out.z[i], deriv) / c[d];
      Complex den = 1;
      for (int j = 0; j < d; ++j)
        if (j != i) den *= out.z[i] - out.z[j];
      const Complex step = num / den;
      out.z[i] -= step;
      change = std::max(change, Real(abs(step)));
    }
    if (change < Real("1e-45")) break;
  }
  for (int i = 0; i < d; ++i) {
    Complex deriv;
    const Complex v = eval(out.z[i], deriv);
    // rounding error of the Horner evaluation
    Real magnitude = 0;
    for (int k = d; k >= 0; --k) magnitude = magnitude * abs(out.z[i]) + abs(c[k]);
    const Real bound = Real(abs(v)) + magnitude * Real("1e-46");
    out.radius.push_back(abs(deriv) == 0 ? Real(1e10) : Real(d * bound / abs(deriv)));
  }
  return out;
}

// +1: certainly nonzero, 0: interval straddles zero.
struct OracleFlags {
  bool disc_certain_nonzero = true;
  bool disc_straddles = false;
  bool e1_certain_nonzero = true;
  bool triple_certain_nonzero = true;
  bool triple_straddles = false;
};

OracleFlags numeric_flags(const IntPoly& f) {
  const auto roots = numeric_roots(f);
  OracleFlags flags;
  const int d = degree(f);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (abs(roots.z[i] - roots.z[j]) <= roots.radius[i] + roots.radius[j]) {
        flags.disc_certain_nonzero = false;
        flags.disc_straddles = true;
      }
  Complex sum = 0;
  Real rad = 0;
  for (int i = 0; i < d; ++i) {
    sum += roots.z[i];
    rad += roots.radius[i];
  }
  flags.e1_certain_nonzero = abs(sum) > rad;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k)
        if (abs(roots.z[i] + roots.z[j] + roots.z[k]) <= roots.radius[i] + roots.radius[j] + roots.radius[k]) {
          flags.triple_certain_nonzero = false;
          flags.triple_straddles = true;
        }
  return flags;
}

}  // namespace

TEST_CASE("general position of the nine sextics") {
  for (long p : {3L, 5L, 7L, 11L}) {
    for (const auto& row : theorem1_polynomials(p)) {
      const auto rep = general_position_check(PadicPolynomial(p, row.polynomial));
      CHECK(rep.disc_nonzero);
      CHECK(rep.e1_nonzero);
      CHECK(rep.triple_sums_nonzero);
      CHECK(rep.overall);
    }
  }
}

TEST_CASE("general position failures") {
  // 1 + 2 + (-3) = 0
  auto rep = general_position_check(PadicPolynomial(7, from_roots({1, 2, -3, 4, 5, 6})));
  CHECK(rep.disc_nonzero);
  CHECK(rep.e1_nonzero);
  CHECK_FALSE(rep.triple_sums_nonzero);
  CHECK_FALSE(rep.overall);

  // sixth roots of unity sum to zero
  rep = general_position_check(PadicPolynomial(7, IntPoly{-1, 0, 0, 0, 0, 0, 1}));
  CHECK(rep.disc_nonzero);
  CHECK_FALSE(rep.e1_nonzero);
  CHECK_FALSE(rep.overall);

  rep = general_position_check(PadicPolynomial(7, from_roots({1, 1, 2, 3, 4, 5})));
  CHECK_FALSE(rep.disc_nonzero);
  CHECK_FALSE(rep.overall);

  // i + (-i) + 0 = 0 with a zero root
  rep = general_position_check(PadicPolynomial(7, multiply(IntPoly{1, 0, 1}, from_roots({0, 3, 5, 11}))));
  CHECK_FALSE(rep.triple_sums_nonzero);

  CHECK_THROWS_AS(general_position_check(PadicPolynomial(7, from_roots({1, 2, 3}))), std::invalid_argument);
  CHECK_THROWS_AS(blowup_line_count(PadicPolynomial(7, from_roots({1, 2, -3, 4, 5, 6}))), NotInGeneralPosition);
}

TEST_CASE("triple sum product on integer roots") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<long> root(-30, 30);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<long> roots(6);
    for (auto& r : roots) r = root(rng);
    mpz_class expected = 1;
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j)
        for (int k = j + 1; k < 6; ++k) expected *= roots[i] + roots[j] + roots[k];
    CHECK(triple_sum_product(from_roots(roots)) == mpq_class(expected));
  }
}

TEST_CASE("general position flag matches the exact triple sum product") {
  std::mt19937_64 rng(81);
  std::uniform_int_distribution<long> root(-6, 6);
  int zeros = 0;
  for (int trial = 0; trial < 150; ++trial) {
    std::vector<long> roots(6);
    for (auto& r : roots) r = root(rng);
    IntPoly f = from_roots(roots);
    // Scale by a leading factor; one of them is the first modulus tried internally.
    const mpz_class lead = trial % 3 == 0 ? mpz_class("2305843009213693951") : mpz_class(trial + 1);
    for (auto& c : f) c *= lead;
    const bool exact = triple_sum_product(f) != 0;
    zeros += !exact;
    CHECK(general_position_check(PadicPolynomial(7, f)).triple_sums_nonzero == exact);
  }
  CHECK(zeros > 10);
  std::uniform_int_distribution<long> coeff(-1000000, 1000000);
  for (int trial = 0; trial < 50; ++trial) {
    IntPoly f(7);
    for (auto& c : f) c = coeff(rng);
    if (f[6] == 0) f[6] = 1;
    CHECK(general_position_check(PadicPolynomial(7, f)).triple_sums_nonzero == (triple_sum_product(f) != 0));
  }
}

TEST_CASE("composed-sum resultants agree with the power-sum route") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> coeff(-6, 6);
  int compared = 0;
  for (int trial = 0; trial < 12; ++trial) {
    IntPoly f;
    for (int i = 0; i < 6; ++i) f.emplace_back(coeff(rng));
    f.emplace_back(1);
    if (f[0] == 0) continue;
    const auto route = resultant_route(f);
    if (route.w_at_zero == 0) continue;
    const mpq_class product = triple_sum_product(f);
    mpq_class sixth = product * product * product;
    sixth *= sixth;
    mpq_class lhs = mpq_class(route.r3_at_zero) * route.d_at_zero * route.d_at_zero;
    lhs /= mpq_class(route.w_at_zero * route.w_at_zero * route.w_at_zero);
    CHECK(lhs == sixth);
    ++compared;
  }
  CHECK(compared >= 8);

  // a case with a vanishing triple sum
  const IntPoly degenerate = from_roots({1, 2, -3, 4, 5, 7});
  const auto route = resultant_route(degenerate);
  CHECK(route.w_at_zero != 0);
  CHECK(route.r3_at_zero == 0);
  CHECK(triple_sum_product(degenerate) == 0);
}

TEST_CASE("zero root: deflated pair and triple sums agree with the direct check") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<long> coeff(-4, 4);
  int checked = 0;
  while (checked < 100) {
    IntPoly rest;
    for (int i = 0; i < 5; ++i) rest.emplace_back(coeff(rng));
    rest.emplace_back(1);
    if (rest[0] == 0 || discriminant(rest) == 0) continue;
    if (checked % 10 == 0) {
      // force a vanishing pair sum: roots a and -a
      const long a = 1 + checked / 10;
      rest = multiply(IntPoly{-a * a, 0, 1}, IntPoly{rest[0], rest[1], rest[2], 1});
      if (rest[0] == 0 || discriminant(rest) == 0) continue;
    }
    const IntPoly f = multiply(IntPoly{0, 1}, rest);
    // pair sums of the deflated polynomial: Res(F~(x), F~(-x)) / prod 2 theta
    const bool pairs_nonzero = resultant(rest, reflect_shift(rest, 0)) != 0;
    const bool inner_nonzero = triple_sum_product(rest) != 0;
    const bool direct = general_position_check(PadicPolynomial(7, f)).triple_sums_nonzero;
    CHECK(direct == (pairs_nonzero && inner_nonzero));

    const auto oracle = numeric_flags(f);
    if (oracle.triple_certain_nonzero) CHECK(direct);
    if (!direct) CHECK(oracle.triple_straddles);
    ++checked;
  }
}

TEST_CASE("exact flags agree with a high precision root oracle") {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<long> coeff(-20, 20);
  std::uniform_int_distribution<long> root(-6, 6);
  for (int trial = 0; trial < 200; ++trial) {
    IntPoly f;
    if (trial % 4 == 0) {
      std::vector<long> roots(6);
      for (auto& r : roots) r = root(rng);
      f = multiply(IntPoly{3}, from_roots(roots));
    } else {
      for (int i = 0; i < 7; ++i) f.emplace_back(coeff(rng));
      if (f[6] == 0) f[6] = 1;
    }
    const auto rep = general_position_check(PadicPolynomial(5, f));
    const auto oracle = numeric_flags(f);
    if (oracle.disc_certain_nonzero) CHECK(rep.disc_nonzero);
    if (!rep.disc_nonzero) CHECK(oracle.disc_straddles);
    if (oracle.e1_certain_nonzero) CHECK(rep.e1_nonzero);
    if (rep.disc_nonzero) {
      if (oracle.triple_certain_nonzero) CHECK(rep.triple_sums_nonzero);
      if (!rep.triple_sums_nonzero) CHECK(oracle.triple_straddles);
    }
  }
}

TEST_CASE("blow-up line counts") {
  const long p = 7;
  const auto rows = theorem1_polynomials(p);
  CHECK(blowup_line_count(PadicPolynomial(p, rows[2].polynomial)) == 2);
  CHECK(blowup_line_count(PadicPolynomial(p, rows[3].polynomial)) == 3);
  CHECK(blowup_line_count(PadicPolynomial(p, rows[6].polynomial)) == 9);
}

TEST_CASE("verify_theorem1") {
  for (long p : {7L, 11L}) {
    const auto report = verify_theorem1(p);
    CHECK(report.passed() == 9);
    CHECK(report.all_pass());
  }
  const auto small = verify_theorem1(3);
  CHECK(small.rows.size() == 9);
  for (const auto& row : small.rows)
    if (row.pass) CHECK(is_admissible_line_count(row.lines));
  CHECK_THROWS_AS(verify_theorem1(4), std::invalid_argument);
}
