#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "cubiclines/errors.hpp"
#include "cubiclines/fano_padic.hpp"
#include "cubiclines/line_counts.hpp"

using namespace cubiclines;

namespace {

CubicCoeffs zero_coeffs() {
  CubicCoeffs f;
  for (auto& c : f) c = 0;
  return f;
}

CubicSurface random_surface(std::mt19937_64& rng, long p, int digits) {
  std::uniform_int_distribution<long> digit(0, p - 1);
  CubicCoeffs f;
  for (auto& c : f) {
    c = 0;
    for (int i = 0; i < digits; ++i) c = c * p + digit(rng);
  }
  return make_surface(p, digits, f);
}

CubicSurface diagonal_surface(long p, const std::array<mpz_class, 4>& w) {
  CubicCoeffs f = zero_coeffs();
  for (int v = 0; v < 4; ++v) {
    Exponent e{0, 0, 0, 0};
    e[v] = 3;
    f[monomial_index(e)] = w[v];
  }
  return make_surface(p, 0, f);
}

// Number of cube roots of a/b in Q_p, p != 3.
int cube_roots(const mpz_class& a, const mpz_class& b, long p) {
  const int v = valuation(a, p) - valuation(b, p);
  if (v % 3 != 0) return 0;
  if (p % 3 == 2) return 1;
  mpz_class ua = a, ub = b;
  while (ua % p == 0) ua /= p;
  while (ub % p == 0) ub /= p;
  // residue of ua / ub
  mpz_class inv, target;
  const mpz_class mod = p;
  mpz_invert(inv.get_mpz_t(), ub.get_mpz_t(), mod.get_mpz_t());
  target = ua * inv;
  mpz_fdiv_r(target.get_mpz_t(), target.get_mpz_t(), mod.get_mpz_t());
  int roots = 0;
  for (long y = 1; y < p; ++y)
    if ((y * y * y - target.get_si()) % p == 0) ++roots;
  return roots;
}

// Lines of P^3(F_p) on f = 0, by row-reduced echelon forms and point counts on each line.
int brute_force_fp_lines(const CubicSurface& s) {
  const long p = s.p;
  int count = 0;
  const mpz_class modulus = p;
  auto on_surface = [&](const std::array<mpz_class, 4>& r1, const std::array<mpz_class, 4>& r2) {
    for (long u = 0; u <= p; ++u) {
      std::array<mpz_class, 4> pt;
      for (int v = 0; v < 4; ++v) pt[v] = u == p ? r2[v] : r1[v] + u * r2[v];
      mpz_class val = evaluate(s.coeffs, pt);
      mpz_fdiv_r(val.get_mpz_t(), val.get_mpz_t(), modulus.get_mpz_t());
      if (val != 0) return false;
    }
    return true;
  };
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      // free entries: row 1 at columns > i except j, row 2 at columns > j
      std::vector<std::pair<int, int>> slots;
      for (int c = i + 1; c < 4; ++c)
        if (c != j) slots.push_back({0, c});
      for (int c = j + 1; c < 4; ++c) slots.push_back({1, c});
      long total = 1;
      for (std::size_t n = 0; n < slots.size(); ++n) total *= p;
      for (long code = 0; code < total; ++code) {
        std::array<mpz_class, 4> r1{0, 0, 0, 0}, r2{0, 0, 0, 0};
        r1[i] = 1;
        r2[j] = 1;
        long rest = code;
        for (auto [row, col] : slots) {
          (row == 0 ? r1 : r2)[col] = rest % p;
          rest /= p;
        }
        if (on_surface(r1, r2)) ++count;
      }
    }
  return count;
}

IntMatrix4 random_unimodular(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> entry(-5, 5);
  IntMatrix4 lower, upper;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      lower[r][c] = r == c ? 1 : (r > c ? entry(rng) : 0);
      upper[r][c] = r == c ? 1 : (r < c ? entry(rng) : 0);
    }
  std::array<int, 4> perm{0, 1, 2, 3};
  std::shuffle(perm.begin(), perm.end(), rng);
  IntMatrix4 out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      out[r][c] = 0;
      for (int m = 0; m < 4; ++m) out[r][c] += lower[perm[r]][m] * upper[m][c];
    }
  return out;
}

FanoOptions general_only() {
  FanoOptions opts;
  opts.allow_fast_path = false;
  return opts;
}

}  // namespace

TEST_CASE("graded-lex monomial order") {
  const auto& mons = cubic_monomials();
  CHECK(mons[0] == Exponent{3, 0, 0, 0});
  CHECK(mons[1] == Exponent{2, 1, 0, 0});
  CHECK(mons[3] == Exponent{2, 0, 0, 1});
  CHECK(mons[4] == Exponent{1, 2, 0, 0});
  CHECK(mons[10] == Exponent{0, 3, 0, 0});
  CHECK(mons[19] == Exponent{0, 0, 0, 3});
  for (int m = 0; m < kCubicMonomialCount; ++m) CHECK(monomial_index(mons[m]) == m);
  CHECK_THROWS_AS(make_surface(7, 0, zero_coeffs()), std::invalid_argument);
}

TEST_CASE("restrict_to_line") {
  const auto fermat = fermat_surface(7);
  // x0 = -x1, x2 = -x3 spanned by e0 - e1 and e2 - e3 in chart (0, 2)
  auto c = restrict_to_line(fermat, line_charts()[1], {-1, 0, 0, -1});
  for (const auto& x : c) CHECK(x == 0);

  CubicCoeffs cube = zero_coeffs();
  cube[0] = 1;
  const auto s = make_surface(7, 0, cube);
  // chart (1, 2) with free columns 0, 3: x0 coefficients a = c = 0
  c = restrict_to_line(s, line_charts()[3], {0, 4, 0, -9});
  for (const auto& x : c) CHECK(x == 0);

  // restriction agrees with evaluation along the line
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> small(-9, 9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto surf = random_surface(rng, 7, 3);
    const auto& chart = line_charts()[trial % 6];
    const LineParams q{small(rng), small(rng), small(rng), small(rng)};
    const auto coeffs = restrict_to_line(surf, chart, q);
    bool any = false;
    for (const auto& x : coeffs) any = any || x != 0;
    CHECK(any);
    for (long st = 0; st < 4; ++st) {
      const long sv = st - 1, tv = 2 * st + 1;
      std::array<mpz_class, 4> pt{0, 0, 0, 0};
      pt[chart.i] += sv;
      pt[chart.k] += sv * q[0];
      pt[chart.l] += sv * q[1];
      pt[chart.j] += tv;
      pt[chart.k] += tv * q[2];
      pt[chart.l] += tv * q[3];
      const mpz_class expected =
          coeffs[0] * sv * sv * sv + coeffs[1] * sv * sv * tv + coeffs[2] * sv * tv * tv + coeffs[3] * tv * tv * tv;
      CHECK(evaluate(surf.coeffs, pt) == expected);
    }
  }
}

TEST_CASE("change of coordinates matches evaluation") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> small(-20, 20);
  for (int trial = 0; trial < 30; ++trial) {
    const auto surf = random_surface(rng, 5, 2);
    const auto a = random_unimodular(rng);
    const auto g = change_coordinates(surf.coeffs, a);
    const std::array<mpz_class, 4> y{small(rng), small(rng), small(rng), small(rng)};
    std::array<mpz_class, 4> x{0, 0, 0, 0};
    for (int v = 0; v < 4; ++v)
      for (int w = 0; w < 4; ++w) x[v] += a[v][w] * y[w];
    CHECK(evaluate(g, y) == evaluate(surf.coeffs, x));
  }
}

TEST_CASE("is_smooth_over_fp") {
  CHECK(is_smooth_over_fp(fermat_surface(7)));
  CHECK(is_smooth_over_fp(fermat_surface(5)));
  CHECK_FALSE(is_smooth_over_fp(fermat_surface(3)));  // (x0 + x1 + x2 + x3)^3 mod 3
  CHECK_FALSE(is_smooth_over_fp(cayley_surface(7)));
  CubicCoeffs cube = zero_coeffs();
  cube[0] = 1;
  CHECK_FALSE(is_smooth_over_fp(make_surface(7, 0, cube)));
  cube[0] = 14;
  CHECK_THROWS_AS(is_smooth_over_fp(make_surface(7, 0, cube)), ZeroReduction);
}

TEST_CASE("fp_line_count") {
  CHECK(fp_line_count(fermat_surface(7)) == 27);
  CHECK(fp_line_count(fermat_surface(5)) == 3);
  CHECK(fp_line_count(fermat_surface(13)) == 27);
  // the Cayley cubic has its nine lines over every prime field
  CHECK(fp_line_count(cayley_surface(7)) == 9);
}

TEST_CASE("fp_line_count agrees with echelon-form enumeration") {
  std::mt19937_64 rng(21);
  for (long p : {3L, 5L, 7L}) {
    for (int trial = 0; trial < (p == 7 ? 15 : 30); ++trial) {
      auto surf = random_surface(rng, p, 1);
      bool nonzero = false;
      for (const auto& c : surf.coeffs) nonzero = nonzero || c != 0;
      if (!nonzero) continue;
      CHECK(fp_line_count(surf) == brute_force_fp_lines(surf));
    }
  }
  CHECK(brute_force_fp_lines(fermat_surface(7)) == 27);
}

TEST_CASE("Fermat surface over Q_p") {
  for (long p : {5L, 7L, 11L, 13L}) {
    const int expected = p % 3 == 1 ? 27 : 3;
    CHECK(count_padic_lines(fermat_surface(p)) == expected);
    CHECK(count_padic_lines(fermat_surface(p), general_only()) == expected);
  }
  // bad reduction at 3: only the general path applies
  CHECK(count_padic_lines(fermat_surface(3)) == 3);
}

TEST_CASE("diagonal surfaces against the cube-root count") {
  std::mt19937_64 rng(99);
  for (long p : {5L, 7L, 13L}) {
    std::uniform_int_distribution<long> unit(1, p - 1);
    std::uniform_int_distribution<int> power(0, 2);
    for (int trial = 0; trial < 25; ++trial) {
      std::array<mpz_class, 4> w;
      for (auto& x : w) x = unit(rng) * prime_power(p, power(rng));
      const int expected = cube_roots(w[1], w[0], p) * cube_roots(w[3], w[2], p) +
                           cube_roots(w[2], w[0], p) * cube_roots(w[3], w[1], p) +
                           cube_roots(w[3], w[0], p) * cube_roots(w[2], w[1], p);
      CHECK(count_padic_lines(diagonal_surface(p, w)) == expected);
    }
  }
}

TEST_CASE("general path equals fast path on surfaces with smooth reduction") {
  std::mt19937_64 rng(2024);
  int compared = 0;
  while (compared < 100) {
    const auto surf = random_surface(rng, 7, 21);
    if (!is_smooth_over_fp(surf)) continue;
    const int fast = count_padic_lines(surf);
    const auto lines = padic_lines(surf);
    CHECK(static_cast<int>(lines.lines.size()) == fast);
    CHECK(lines.max_jacobian_valuation == 0);
    CHECK(is_admissible_line_count(fast));
    ++compared;
  }
}

TEST_CASE("line count is invariant under coordinate changes") {
  std::mt19937_64 rng(77);
  const long p = 7;
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto surf = random_surface(rng, p, 12);
    int base;
    try {
      base = count_padic_lines(surf);
    } catch (const DepthExceeded&) {
      continue;
    }
    const auto moved = make_surface(p, 12, change_coordinates(surf.coeffs, random_unimodular(rng)));
    CHECK(count_padic_lines(moved) == base);
    CHECK(count_padic_lines(moved, general_only()) == base);
    if (trial % 3 == 0) {
      // x3 -> p x3 is invertible over Q_p but not over Z_p
      IntMatrix4 scale;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) scale[r][c] = r == c ? (r == 3 ? p : 1) : 0;
      const auto squeezed = make_surface(p, 12, change_coordinates(surf.coeffs, scale));
      CHECK(count_padic_lines(squeezed) == base);
    }
    ++checked;
  }
  CHECK(checked >= 50);
}

TEST_CASE("accepted lines are distinct Plucker classes") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    auto surf = random_surface(rng, 7, 10);
    if (trial % 2) {
      // force bad reduction
      IntMatrix4 scale;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) scale[r][c] = r == c ? (r == 0 ? 49 : 1) : 0;
      surf = make_surface(7, 10, change_coordinates(surf.coeffs, scale));
    }
    PadicLineSet set;
    try {
      set = padic_lines(surf);
    } catch (const DepthExceeded&) {
      continue;
    }
    std::set<std::array<mpz_class, 6>> keys;
    for (const auto& line : set.lines) {
      CHECK(line.relation().is_zero());
      keys.insert(line.key(8));
      int units = 0;
      for (const auto& c : line.coords) units += (!c.is_zero() && c.valuation() == 0) ? 1 : 0;
      CHECK(units >= 1);
    }
    CHECK(keys.size() == set.lines.size());
    CHECK(is_admissible_line_count(static_cast<int>(set.lines.size())));
  }
}

TEST_CASE("Fermat lines have the expected Plucker coordinates") {
  // x0 = -x1, x2 = -x3: row space of (1,-1,0,0), (0,0,1,-1)
  const auto set = padic_lines(fermat_surface(5));
  REQUIRE(set.lines.size() == 3);
  std::set<std::array<mpz_class, 6>> keys;
  for (const auto& line : set.lines) keys.insert(line.key(4));
  const mpz_class m = prime_power(5, 4);
  // p01 = 0, p02 = 1, p03 = -1, p12 = -1, p13 = 1, p23 = 0
  CHECK(keys.count({0, 1, m - 1, m - 1, 1, 0}) == 1);
}

TEST_CASE("reductions singular only over an extension of F_p") {
  // no F_p-point is singular, yet some F_p-line has a degenerate Jacobian
  std::mt19937_64 rng(2024);
  int found = 0;
  for (int trial = 0; trial < 3000 && found < 3; ++trial) {
    const auto surf = random_surface(rng, 7, 21);
    if (!is_smooth_over_fp(surf)) continue;
    const int fp = fp_line_count(surf);
    if (is_admissible_line_count(fp)) continue;
    ++found;
    const int count = count_padic_lines(surf);
    CHECK(is_admissible_line_count(count));
    CHECK(count == static_cast<int>(padic_lines(surf).lines.size()));
  }
  CHECK(found >= 1);
}

TEST_CASE("tropical-type surfaces: invariance under unimodular coordinate changes") {
  std::mt19937_64 rng(606);
  const long p = 7;
  std::uniform_int_distribution<int> nu(0, 5);
  std::uniform_int_distribution<long> unit(1, p - 1);
  for (int trial = 0; trial < 40; ++trial) {
    CubicCoeffs f;
    for (auto& c : f) c = (trial % 2 ? unit(rng) : 1) * prime_power(p, nu(rng));
    const auto surf = make_surface(p, 5, f);
    const int base = count_padic_lines(surf);
    CHECK(is_admissible_line_count(base));
    const auto moved = make_surface(p, 5, change_coordinates(f, random_unimodular(rng)));
    CHECK(count_padic_lines(moved) == base);
  }
}
