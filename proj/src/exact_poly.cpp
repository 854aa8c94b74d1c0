#include "cubiclines/exact_poly.hpp"

#include <stdexcept>
#include <utility>

namespace cubiclines {

int degree(const IntPoly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
    if (f[static_cast<std::size_t>(i)] != 0) return i;
  return -1;
}

int degree(const RatPoly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
    if (f[static_cast<std::size_t>(i)] != 0) return i;
  return -1;
}

void trim(IntPoly& f) { f.resize(static_cast<std::size_t>(degree(f) + 1)); }
void trim(RatPoly& f) { f.resize(static_cast<std::size_t>(degree(f) + 1)); }

IntPoly derivative(const IntPoly& f) {
  IntPoly out;
  for (std::size_t i = 1; i < f.size(); ++i) out.push_back(f[i] * static_cast<long>(i));
  trim(out);
  return out;
}

IntPoly multiply(const IntPoly& f, const IntPoly& g) {
  if (f.empty() || g.empty()) return {};
  IntPoly out(f.size() + g.size() - 1, mpz_class(0));
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) out[i + j] += f[i] * g[j];
  trim(out);
  return out;
}

mpz_class evaluate(const IntPoly& f, const mpz_class& x) {
  mpz_class acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
  return acc;
}

mpq_class evaluate(const RatPoly& f, const mpq_class& x) {
  mpq_class acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
  return acc;
}

RatPoly to_rational(const IntPoly& f) {
  RatPoly out;
  out.reserve(f.size());
  for (const auto& c : f) out.emplace_back(c);
  trim(out);
  return out;
}

RatPoly monic(const IntPoly& f) {
  RatPoly out = to_rational(f);
  if (out.empty()) throw std::invalid_argument("monic: zero polynomial");
  const mpq_class lc = out.back();
  for (auto& c : out) c /= lc;
  return out;
}

mpz_class resultant(const IntPoly& f, const IntPoly& g) {
  const int m = degree(f);
  const int n = degree(g);
  if (m < 0 || n < 0) return 0;
  if (m == 0 && n == 0) return 1;
  const int size = m + n;
  std::vector<std::vector<mpz_class>> a(static_cast<std::size_t>(size),
                                        std::vector<mpz_class>(static_cast<std::size_t>(size), 0));
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= m; ++i) a[r][r + i] = f[static_cast<std::size_t>(m - i)];
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= n; ++i) a[n + r][r + i] = g[static_cast<std::size_t>(n - i)];

  int sign = 1;
  mpz_class prev = 1;
  for (int k = 0; k < size - 1; ++k) {
    if (a[k][k] == 0) {
      int swap_row = -1;
      for (int r = k + 1; r < size; ++r)
        if (a[r][k] != 0) {
          swap_row = r;
          break;
        }
      if (swap_row < 0) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (int i = k + 1; i < size; ++i) {
      for (int j = k + 1; j < size; ++j) {
        a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a[k][k];
  }
  mpz_class det = a[size - 1][size - 1];
  return sign > 0 ? det : mpz_class(-det);
}

mpz_class discriminant(const IntPoly& f) {
  const int d = degree(f);
  if (d < 1) throw std::invalid_argument("discriminant: degree must be at least 1");
  mpz_class r = resultant(f, derivative(f));
  mpz_divexact(r.get_mpz_t(), r.get_mpz_t(), f[static_cast<std::size_t>(d)].get_mpz_t());
  return (d * (d - 1) / 2) % 2 == 0 ? r : mpz_class(-r);
}

}  // namespace cubiclines
