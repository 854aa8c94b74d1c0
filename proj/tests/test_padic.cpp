#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "cubiclines/errors.hpp"
#include "cubiclines/padic.hpp"

using namespace cubiclines;

namespace {

mpz_class random_integer(std::mt19937_64& rng, long p, int digits) {
  std::uniform_int_distribution<long> digit(0, p - 1);
  mpz_class n = 0;
  for (int i = 0; i < digits; ++i) n = n * p + digit(rng);
  return n;
}

PadicScalar random_nonzero(std::mt19937_64& rng, long p, int precision) {
  std::uniform_int_distribution<int> shift(-4, 6);
  for (;;) {
    mpz_class n = random_integer(rng, p, precision + 3);
    if (n == 0) continue;
    return PadicScalar::make(n, p, precision).shifted(shift(rng));
  }
}

}  // namespace

TEST_CASE("make_scalar normalizes to unit times power of p") {
  auto x = PadicScalar::make(98, 7, 4);
  CHECK(x.valuation() == 2);
  CHECK(x.unit() == 2);
  CHECK(x.precision() == 4);

  auto z = PadicScalar::make(0, 7, 4);
  CHECK(z.is_exact_zero());
  CHECK(z.valuation() == kInfiniteValuation);
  CHECK_THROWS_AS(z.unit(), PrecisionExhausted);

  // 17100 = 2442 * 7 + 6, so 7 does not divide it
  auto y = PadicScalar::make(17100, 7, 4);
  CHECK(y.valuation() == 0);
  CHECK(y.unit() == 17100 % 2401);
}

TEST_CASE("non-odd or non-prime p is rejected") {
  CHECK_THROWS_AS(PadicScalar::make(5, 2, 4), std::invalid_argument);
  CHECK_THROWS_AS(PadicScalar::make(5, 9, 4), std::invalid_argument);
  CHECK_THROWS_AS(PadicScalar::make(5, 1, 4), std::invalid_argument);
  CHECK_THROWS_AS(PadicScalar::make(5, 7, 0), std::invalid_argument);
  CHECK_THROWS_AS(quadratic_extensions(2), std::invalid_argument);
}

TEST_CASE("field operations") {
  const long p = 7;
  auto prod = PadicScalar::make(7, p, 8) * PadicScalar::make(14, p, 8);
  CHECK(prod.valuation() == 2);
  CHECK(prod.unit() == 2);

  auto x = PadicScalar::make(12345, p, 8);
  auto zero = x + (-x);
  CHECK(zero.is_zero());
  CHECK(zero.absolute_precision() == 8);
  CHECK(x - x == PadicScalar::zero(p));

  // 1 / (1 - 7) = 1 + 7 + 7^2 + ... ; truncated geometric sum (7^N - 1) / 6
  for (int n : {1, 5, 32}) {
    auto q = PadicScalar::make(1, p, n) / PadicScalar::make(1 - 7, p, n);
    mpz_class geometric = 0;
    for (int i = 0; i < n; ++i) geometric += prime_power(p, i);
    CHECK(q.valuation() == 0);
    CHECK(q.unit() == geometric);
  }

  auto quotient = PadicScalar::make(5, p, 6) / PadicScalar::make(49 * 3, p, 6);
  CHECK(quotient.valuation() == -2);
  CHECK(quotient * PadicScalar::make(49 * 3, p, 6) == PadicScalar::make(5, p, 6));
}

TEST_CASE("cancellation tracks absolute precision") {
  const long p = 5;
  auto a = PadicScalar::make(1 + 125 * 3, p, 6);
  auto b = PadicScalar::make(1, p, 6);
  auto diff = a - b;
  CHECK(diff.valuation() == 3);
  CHECK(diff.unit() == 3);
  CHECK(diff.absolute_precision() == 6);
  CHECK(diff.precision() == 3);

  auto c = PadicScalar::make(1 + 5 * 5 * 5 * 5 * 5 * 5 * 7, p, 6);  // equals b mod 5^6
  auto lost = c - b;
  CHECK(lost.is_zero());
  CHECK_FALSE(lost.is_exact_zero());
  CHECK_THROWS_AS(PadicScalar::make(1, p, 6) / lost, PrecisionExhausted);
  CHECK_THROWS_AS(PadicScalar::make(1, p, 6) / PadicScalar::zero(p), DivisionByZero);
}

TEST_CASE("valuation is multiplicative and normalization idempotent") {
  std::mt19937_64 rng(11);
  for (long p : {3L, 5L, 7L, 11L}) {
    for (int trial = 0; trial < 300; ++trial) {
      auto x = random_nonzero(rng, p, 12);
      auto y = random_nonzero(rng, p, 9);
      CHECK((x * y).valuation() == x.valuation() + y.valuation());
      CHECK((x / y).valuation() == x.valuation() - y.valuation());
      CHECK((x * y).precision() == 9);

      auto again = PadicScalar::make(x.unit(), p, x.precision()).shifted(x.valuation());
      CHECK(again.valuation() == x.valuation());
      CHECK(again.unit() == x.unit());
      CHECK(again.precision() == x.precision());
    }
  }
}

TEST_CASE("is_square") {
  CHECK(is_square(PadicScalar::make(2, 7)));  // 3^2 = 9 = 2 mod 7
  CHECK_FALSE(is_square(PadicScalar::make(7, 7)));
  CHECK(is_square(PadicScalar::make(49 * 2, 7)));
  CHECK_FALSE(is_square(PadicScalar::make(3, 7)));
  CHECK(smallest_nonresidue(7) == 3);
  CHECK(smallest_nonresidue(5) == 2);
  CHECK(smallest_nonresidue(3) == 2);

  std::mt19937_64 rng(5);
  for (long p : {3L, 5L, 7L, 13L}) {
    CHECK_FALSE(is_square(PadicScalar::make(smallest_nonresidue(p), p)));
    for (int trial = 0; trial < 200; ++trial) {
      auto x = random_nonzero(rng, p, 10);
      CHECK(is_square(x * x));
    }
  }
}

TEST_CASE("quadratic extension descriptors") {
  auto exts = quadratic_extensions(7);
  CHECK(exts[0].kind == ExtensionKind::unramified);
  CHECK(exts[0].radicand == 3);
  CHECK(exts[0].ramification == 1);
  CHECK(exts[0].residue_field_size == 49);
  CHECK(exts[1].radicand == 7);
  CHECK(exts[1].ramification == 2);
  CHECK(exts[2].radicand == 21);
  CHECK(exts[2].residue_field_size == 7);
}

TEST_CASE("quadratic extension arithmetic") {
  const long p = 7;
  const auto ram = make_extension(p, ExtensionKind::ramified_p);
  auto root = QuadExtScalar::sqrt_radicand(ram, 10);
  auto sq = root * root;
  CHECK(sq.radical_part().is_zero());
  CHECK(sq.rational_part() == PadicScalar::make(7, p, 10));
  CHECK(root.valuation_units() == 1);
  CHECK(sq.valuation_units() == 2);

  auto z = QuadExtScalar(ram, PadicScalar::make(3, p, 10), PadicScalar::make(5, p, 10));
  auto n = z.conjugate() * z;
  CHECK(n.radical_part().is_zero());
  CHECK(n.rational_part() == PadicScalar::make(9 - 7 * 25, p, 10));
  CHECK(n.rational_part() == z.norm());

  auto inv = root.inverse();
  CHECK(inv.rational_part().is_zero());
  CHECK(inv.radical_part() == PadicScalar::make(1, p, 10) / PadicScalar::make(7, p, 10));
  CHECK(inv * root == QuadExtScalar::from_base(ram, PadicScalar::make(1, p, 10)));

  const auto unr = make_extension(p, ExtensionKind::unramified);
  auto w = QuadExtScalar(unr, PadicScalar::make(1, p, 10), PadicScalar::make(1, p, 10));
  CHECK_THROWS_AS(w * root, DescriptorMismatch);
  CHECK(w.valuation_units() == 0);
  CHECK((w / w) == QuadExtScalar::from_base(unr, PadicScalar::make(1, p, 10)));
}

TEST_CASE("norm valuation is twice the element valuation") {
  std::mt19937_64 rng(17);
  for (long p : {3L, 7L}) {
    for (const auto& ext : quadratic_extensions(p)) {
      for (int trial = 0; trial < 200; ++trial) {
        auto a = random_nonzero(rng, p, 10);
        auto b = random_nonzero(rng, p, 10);
        QuadExtScalar z(ext, a, b);
        const int units = z.valuation_units();
        CHECK(ext.ramification * z.norm().valuation() == 2 * units);
        auto w = QuadExtScalar(ext, random_nonzero(rng, p, 10), random_nonzero(rng, p, 10));
        CHECK((z * w).valuation_units() == units + w.valuation_units());
      }
    }
  }
}

TEST_CASE("division by uniformizer and residues") {
  const long p = 5;
  for (const auto& ext : quadratic_extensions(p)) {
    auto pi = QuadExtScalar::uniformizer(ext, 12);
    auto x = QuadExtScalar(ext, PadicScalar::make(2, p, 12), PadicScalar::make(1, p, 12));
    // valuation 0 in all three: a is a unit
    CHECK(x.valuation_units() == 0);
    auto shifted = x * pi * pi * pi;
    CHECK(shifted.valuation_units() == 3);
    auto back = shifted.divided_by_uniformizer(3);
    CHECK(back == x);
    auto res = back.residue();
    CHECK(res.first == 2);
    CHECK(res.second == (ext.ramification == 1 ? 1 : 0));
  }
}
