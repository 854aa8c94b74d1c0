#include "cubiclines/blowup.hpp"

#include <cstdint>
#include <exception>
#include <stdexcept>

#include "cubiclines/errors.hpp"

namespace cubiclines {

namespace {

// Power sums p_0..p_n of the roots of a monic polynomial (Newton's identities).
std::vector<mpq_class> power_sums(const RatPoly& monic_f, int n) {
  const int d = degree(monic_f);
  std::vector<mpq_class> e(static_cast<std::size_t>(d + 1));
  for (int k = 0; k <= d; ++k) {
    e[k] = monic_f[static_cast<std::size_t>(d - k)];
    if (k % 2) e[k] = -e[k];
  }
  std::vector<mpq_class> ps(static_cast<std::size_t>(n + 1));
  ps[0] = d;
  for (int k = 1; k <= n; ++k) {
    mpq_class acc = 0;
    for (int i = 1; i < k && i <= d; ++i) acc += (i % 2 ? e[i] : mpq_class(-e[i])) * ps[k - i];
    if (k <= d) acc += (k % 2 ? mpq_class(k * e[k]) : mpq_class(-k * e[k]));
    ps[k] = acc;
  }
  return ps;
}

using Series = std::vector<mpq_class>;

Series series_mul(const Series& a, const Series& b) {
  const std::size_t n = a.size();
  Series out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j < n; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

}  // namespace

mpq_class triple_sum_product(const IntPoly& f) {
  const int d = degree(f);
  if (d < 3) throw std::invalid_argument("triple_sum_product: degree must be at least 3");
  const int count = d * (d - 1) * (d - 2) / 6;
  const std::vector<mpq_class> ps = power_sums(monic(f), count);

  // P_j(t) = sum_i exp(j t theta_i), truncated after t^count.
  std::vector<mpq_class> inv_factorial(static_cast<std::size_t>(count + 1));
  inv_factorial[0] = 1;
  for (int m = 1; m <= count; ++m) inv_factorial[m] = inv_factorial[m - 1] / m;
  auto exp_sum = [&](int j) {
    Series s(static_cast<std::size_t>(count + 1));
    mpz_class jm = 1;
    for (int m = 0; m <= count; ++m, jm *= j) s[m] = ps[m] * jm * inv_factorial[m];
    return s;
  };
  const Series p1 = exp_sum(1);
  const Series p2 = exp_sum(2);
  const Series p3 = exp_sum(3);

  // e_3 = (P1^3 - 3 P1 P2 + 2 P3) / 6
  const Series p1sq = series_mul(p1, p1);
  const Series p1cube = series_mul(p1sq, p1);
  const Series p1p2 = series_mul(p1, p2);
  std::vector<mpq_class> q(static_cast<std::size_t>(count + 1));
  mpz_class factorial = 1;
  for (int m = 0; m <= count; ++m) {
    if (m > 0) factorial *= m;
    q[m] = (p1cube[m] - 3 * p1p2[m] + 2 * p3[m]) / 6 * factorial;
  }

  // elementary symmetric functions of the triple sums
  std::vector<mpq_class> e(static_cast<std::size_t>(count + 1));
  e[0] = 1;
  for (int k = 1; k <= count; ++k) {
    mpq_class acc = 0;
    for (int i = 1; i <= k; ++i) acc += (i % 2 ? e[k - i] * q[i] : mpq_class(-e[k - i] * q[i]));
    e[k] = acc / k;
  }
  return e[count];
}

namespace {

// The same computation modulo a word-sized prime q. Valid when q does not
// divide the leading coefficient; the exact product has only powers of the
// leading coefficient in its denominator.
struct ModQ {
  std::uint64_t q;
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % q);
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % q; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + q - b) % q; }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1;
    for (; e; e >>= 1, a = mul(a, a))
      if (e & 1) r = mul(r, a);
    return r;
  }
  std::uint64_t inv(std::uint64_t a) const { return pow(a, q - 2); }
  std::uint64_t reduce(const mpz_class& x) const {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), q);
    return r.get_ui();
  }
};

// Returns false when undecided (q divides the leading coefficient).
bool triple_sum_product_mod(const IntPoly& f, const ModQ& m, std::uint64_t& out) {
  const int d = degree(f);
  const int count = d * (d - 1) * (d - 2) / 6;
  const std::uint64_t lead = m.reduce(f[static_cast<std::size_t>(d)]);
  if (lead == 0) return false;
  const std::uint64_t lead_inv = m.inv(lead);
  std::vector<std::uint64_t> e(static_cast<std::size_t>(d + 1));
  for (int k = 0; k <= d; ++k) {
    e[k] = m.mul(m.reduce(f[static_cast<std::size_t>(d - k)]), lead_inv);
    if (k % 2) e[k] = m.sub(0, e[k]);
  }
  std::vector<std::uint64_t> ps(static_cast<std::size_t>(count + 1));
  ps[0] = static_cast<std::uint64_t>(d);
  for (int k = 1; k <= count; ++k) {
    std::uint64_t acc = 0;
    for (int i = 1; i < k && i <= d; ++i) {
      const std::uint64_t t = m.mul(e[i], ps[k - i]);
      acc = i % 2 ? m.add(acc, t) : m.sub(acc, t);
    }
    if (k <= d) {
      const std::uint64_t t = m.mul(static_cast<std::uint64_t>(k), e[k]);
      acc = k % 2 ? m.add(acc, t) : m.sub(acc, t);
    }
    ps[k] = acc;
  }
  std::vector<std::uint64_t> inv_factorial(static_cast<std::size_t>(count + 1)), factorial(inv_factorial.size());
  factorial[0] = inv_factorial[0] = 1;
  for (int k = 1; k <= count; ++k) {
    factorial[k] = m.mul(factorial[k - 1], static_cast<std::uint64_t>(k));
    inv_factorial[k] = m.inv(factorial[k]);
  }
  auto exp_sum = [&](std::uint64_t j) {
    std::vector<std::uint64_t> s(static_cast<std::size_t>(count + 1));
    std::uint64_t jm = 1;
    for (int k = 0; k <= count; ++k, jm = m.mul(jm, j)) s[k] = m.mul(m.mul(ps[k], jm), inv_factorial[k]);
    return s;
  };
  auto series_mul_mod = [&](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    std::vector<std::uint64_t> r(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; i + j < a.size(); ++j) r[i + j] = m.add(r[i + j], m.mul(a[i], b[j]));
    return r;
  };
  const auto p1 = exp_sum(1), p2 = exp_sum(2), p3 = exp_sum(3);
  const auto p1cube = series_mul_mod(series_mul_mod(p1, p1), p1);
  const auto p1p2 = series_mul_mod(p1, p2);
  const std::uint64_t inv6 = m.inv(6);
  std::vector<std::uint64_t> qs(static_cast<std::size_t>(count + 1));
  for (int k = 0; k <= count; ++k) {
    const std::uint64_t v = m.add(m.sub(p1cube[k], m.mul(3, p1p2[k])), m.mul(2, p3[k]));
    qs[k] = m.mul(m.mul(v, inv6), factorial[k]);
  }
  std::vector<std::uint64_t> es(static_cast<std::size_t>(count + 1));
  es[0] = 1;
  for (int k = 1; k <= count; ++k) {
    std::uint64_t acc = 0;
    for (int i = 1; i <= k; ++i) {
      const std::uint64_t t = m.mul(es[k - i], qs[i]);
      acc = i % 2 ? m.add(acc, t) : m.sub(acc, t);
    }
    es[k] = m.mul(acc, m.inv(static_cast<std::uint64_t>(k)));
  }
  out = es[count];
  return true;
}

bool triple_sum_product_nonzero(const IntPoly& f) {
  for (std::uint64_t q : {2305843009213693951ULL, 4611686018427387847ULL}) {
    std::uint64_t r = 0;
    if (triple_sum_product_mod(f, ModQ{q}, r) && r != 0) return true;
  }
  return triple_sum_product(f) != 0;
}

}  // namespace

GeneralPositionReport general_position_check(const PadicPolynomial& f) {
  if (f.degree() != 6) throw std::invalid_argument("general_position_check: degree must be 6");
  GeneralPositionReport report;
  report.disc_nonzero = discriminant(f) != 0;
  report.e1_nonzero = f.coefficient(5) != 0;
  report.triple_sums_nonzero = triple_sum_product_nonzero(f.coefficients());
  report.overall = report.disc_nonzero && report.e1_nonzero && report.triple_sums_nonzero;
  return report;
}

int blowup_line_count(const PadicPolynomial& f) {
  if (!general_position_check(f).overall)
    throw NotInGeneralPosition("the six roots lie on the E6 arrangement");
  return line_count_from_pattern(factor_pattern(f));
}

int Theorem1Report::passed() const {
  int n = 0;
  for (const auto& row : rows) n += row.pass ? 1 : 0;
  return n;
}

std::vector<Theorem1Row> theorem1_polynomials(long p) {
  auto lin = [](long c) { return IntPoly{c, 1}; };
  auto prod = [](std::initializer_list<IntPoly> fs) {
    IntPoly out{1};
    for (const auto& g : fs) out = multiply(out, g);
    return out;
  };
  const mpz_class P = p;
  const IntPoly x4p{P, 0, 0, 0, 1};       // X^4 + p
  const IntPoly x2p{P, 0, 1};             // X^2 + p
  const IntPoly x2ppx{P, P, 1};           // X^2 + pX + p
  const IntPoly x2p2x{P, P * P, 1};       // X^2 + p^2 X + p
  const IntPoly x3{P, 0, P, 1};           // X^3 + pX^2 + p
  const IntPoly x5{P, 0, 0, 0, P, 1};     // X^5 + pX^4 + p
  const IntPoly x6{P, 0, 0, 0, 0, P, 1};  // X^6 + pX^5 + p

  std::vector<Theorem1Row> rows(9);
  auto set = [&rows](int i, std::string label, IntPoly f, FactorPattern pat, int lines) {
    rows[i].label = std::move(label);
    rows[i].polynomial = std::move(f);
    rows[i].expected_pattern = pat;
    rows[i].expected_lines = lines;
  };
  set(0, "X^6 + pX^5 + p", x6, {0, 0}, 0);
  set(1, "(X^4 + p)(X^2 + pX + p)", prod({x4p, x2ppx}), {0, 1}, 1);
  set(2, "X(X^5 + pX^4 + p)", prod({lin(0), x5}), {1, 0}, 2);
  set(3, "(X^2 + p)(X^2 + pX + p)(X^2 + p^2X + p)", prod({x2p, x2ppx, x2p2x}), {0, 3}, 3);
  set(4, "(X + 1)(X + 2)(X^4 + p)", prod({lin(1), lin(2), x4p}), {2, 0}, 5);
  set(5, "(X + 1)(X + 2)(X^2 + p)(X^2 + pX + p)", prod({lin(1), lin(2), x2p, x2ppx}), {2, 2}, 7);
  set(6, "(X + 1)(X + 2)(X + 3)(X^3 + pX^2 + p)", prod({lin(1), lin(2), lin(3), x3}), {3, 0}, 9);
  set(7, "(X + 1)(X + 2)(X + 3)(X + 4)(X^2 + p)", prod({lin(1), lin(2), lin(3), lin(4), x2p}), {4, 1}, 15);
  set(8, "X(X + 1)(X + 2)(X + 3)(X + 4)(X + 5)", prod({lin(0), lin(1), lin(2), lin(3), lin(4), lin(5)}), {6, 0},
      27);
  return rows;
}

Theorem1Report verify_theorem1(long p) {
  require_odd_prime(p);
  Theorem1Report report;
  report.p = p;
  report.rows = theorem1_polynomials(p);
  for (auto& row : report.rows) {
    try {
      const PadicPolynomial f(p, row.polynomial);
      row.position = general_position_check(f);
      if (row.position.disc_nonzero) {
        row.pattern = factor_pattern(f);
        row.lines = line_count_from_pattern(row.pattern);
      }
      row.pass = row.position.overall && row.pattern == row.expected_pattern && row.lines == row.expected_lines;
    } catch (const std::exception& err) {
      row.error = err.what();
      row.pass = false;
    }
  }
  return report;
}

}  // namespace cubiclines
