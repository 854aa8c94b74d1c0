#include "cubiclines/fano_padic.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "cubiclines/errors.hpp"
#include "cubiclines/line_counts.hpp"

namespace cubiclines {

namespace {

// Index of the sorted pair (u, v) in p01, p02, p03, p12, p13, p23.
constexpr int pair_index(int u, int v) {
  if (u > v) std::swap(u, v);
  return u == 0 ? v - 1 : (u == 1 ? v + 1 : 5);
}

template <class T>
void make_rows(const LineChart& ch, const std::array<T, 4>& q, std::array<T, 4>& r1, std::array<T, 4>& r2) {
  r1 = {T(0), T(0), T(0), T(0)};
  r2 = r1;
  r1[ch.i] = 1;
  r1[ch.k] = q[0];
  r1[ch.l] = q[1];
  r2[ch.j] = 1;
  r2[ch.k] = q[2];
  r2[ch.l] = q[3];
}

// 2x2 minors of the chart matrix, in pair order.
template <class T>
std::array<T, 6> chart_minors(const LineChart& ch, const std::array<T, 4>& q) {
  std::array<T, 4> r1, r2;
  make_rows(ch, q, r1, r2);
  std::array<T, 6> out;
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) out[pair_index(u, v)] = r1[u] * r2[v] - r1[v] * r2[u];
  return out;
}

// Restriction of a form to s r1 + t r2; entry j is the coefficient of s^(deg-j) t^j.
template <class T, class Reduce>
std::vector<T> restrict_terms(const std::vector<FormTerm<T>>& terms, int degree, const std::array<T, 4>& r1,
                              const std::array<T, 4>& r2, Reduce reduce) {
  std::vector<T> out(static_cast<std::size_t>(degree + 1), T(0));
  std::vector<T> prod, next;
  for (const auto& term : terms) {
    prod.assign(1, term.coefficient);
    for (int v : term.factors) {
      next.assign(prod.size() + 1, T(0));
      for (std::size_t j = 0; j < prod.size(); ++j) {
        next[j] += prod[j] * r1[v];
        next[j + 1] += prod[j] * r2[v];
      }
      for (auto& x : next) reduce(x);
      prod.swap(next);
    }
    for (std::size_t j = 0; j < prod.size(); ++j) {
      out[j] += prod[j];
      reduce(out[j]);
    }
  }
  return out;
}

struct ModP {
  long p;
  void operator()(long& x) const {
    x %= p;
    if (x < 0) x += p;
  }
};

struct NoReduce {
  void operator()(mpz_class&) const {}
};

std::vector<FormTerm<long>> terms_mod_p(const CubicSurface& s) {
  std::array<long, kCubicMonomialCount> f;
  for (int m = 0; m < kCubicMonomialCount; ++m) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), s.coeffs[m].get_mpz_t(), static_cast<unsigned long>(s.p));
    f[m] = r.get_si();
  }
  return cubic_terms(f);
}

long eval_mod_p(const std::vector<FormTerm<long>>& terms, const std::array<long, 4>& x, long p) {
  long total = 0;
  for (const auto& term : terms) {
    long v = term.coefficient;
    for (int f : term.factors) v = v * x[f] % p;
    total = (total + v) % p;
  }
  return total;
}

struct FpLine {
  int chart;
  std::array<long, 4> params;
};

bool canonical_in_chart(int chart, const std::array<long, 6>& minors, long p) {
  for (int q = 0; q < chart; ++q)
    if (minors[q] % p != 0) return false;
  return true;
}

std::vector<FpLine> fp_lines(const CubicSurface& s) {
  const long p = s.p;
  const auto terms = terms_mod_p(s);
  const ModP reduce{p};
  std::vector<FpLine> out;
  const auto& charts = line_charts();
  for (int ci = 0; ci < 6; ++ci) {
    const LineChart& ch = charts[ci];
    // f(row 1) depends only on (a, b), f(row 2) only on (c, d)
    std::vector<std::array<long, 2>> zero1, zero2;
    for (long x = 0; x < p; ++x)
      for (long y = 0; y < p; ++y) {
        std::array<long, 4> r1{0, 0, 0, 0}, r2{0, 0, 0, 0};
        r1[ch.i] = 1;
        r1[ch.k] = x;
        r1[ch.l] = y;
        r2[ch.j] = 1;
        r2[ch.k] = x;
        r2[ch.l] = y;
        if (eval_mod_p(terms, r1, p) == 0) zero1.push_back({x, y});
        if (eval_mod_p(terms, r2, p) == 0) zero2.push_back({x, y});
      }
    for (const auto& ab : zero1)
      for (const auto& cd : zero2) {
        const std::array<long, 4> q{ab[0], ab[1], cd[0], cd[1]};
        auto minors = chart_minors(ch, q);
        for (auto& m : minors) reduce(m);
        if (!canonical_in_chart(ci, minors, p)) continue;
        std::array<long, 4> r1, r2;
        make_rows(ch, q, r1, r2);
        const auto coeffs = restrict_terms(terms, 3, r1, r2, reduce);
        if (coeffs[1] == 0 && coeffs[2] == 0) out.push_back({ci, q});
      }
  }
  return out;
}

int mpz_valuation(const mpz_class& x, long p) { return x == 0 ? kInfiniteValuation : valuation(x, p); }

using Matrix4 = std::array<std::array<mpz_class, 4>, 4>;

mpz_class det3(const Matrix4& m, int skip_row, int skip_col) {
  int rows[3], cols[3];
  for (int i = 0, r = 0, c = 0; i < 4; ++i) {
    if (i != skip_row) rows[r++] = i;
    if (i != skip_col) cols[c++] = i;
  }
  auto e = [&](int r, int c) -> const mpz_class& { return m[rows[r]][cols[c]]; };
  return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
         e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
}

mpz_class det4(const Matrix4& m) {
  mpz_class total = 0;
  for (int c = 0; c < 4; ++c) {
    if (m[0][c] == 0) continue;
    const mpz_class minor = m[0][c] * det3(m, 0, c);
    if (c % 2) total -= minor;
    else total += minor;
  }
  return total;
}

Matrix4 adjugate(const Matrix4& m) {
  Matrix4 adj;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      adj[c][r] = det3(m, r, c);
      if ((r + c) % 2) adj[c][r] = -adj[c][r];
    }
  return adj;
}

long inverse_mod(long a, long p) {
  mpz_class r, x = a, m = p;
  mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r.get_si();
}

// Row-reduced form of a t = b over F_p.
struct LinearSolution {
  std::array<std::array<long, 4>, 4> a{};
  std::array<long, 4> b{};
  std::array<int, 4> pivot_col{-1, -1, -1, -1};
  int rank = 0;
  bool consistent = true;
  std::vector<int> free_cols;

  long size(long p) const {
    long n = 1;
    for (std::size_t i = 0; i < free_cols.size(); ++i) n *= p;
    return n;
  }

  // code runs over 0 .. size() - 1 and encodes the free coordinates
  std::array<long, 4> point(long code, long p) const {
    std::array<long, 4> t{0, 0, 0, 0};
    for (int c : free_cols) {
      t[c] = code % p;
      code /= p;
    }
    for (int r = 0; r < rank; ++r) {
      long v = b[r];
      for (int c : free_cols) v -= a[r][c] * t[c];
      t[pivot_col[r]] = ((v % p) + p) % p;
    }
    return t;
  }
};

LinearSolution row_reduce(std::array<std::array<long, 4>, 4> a, std::array<long, 4> b, int rows, long p) {
  LinearSolution out;
  int rank = 0;
  for (int col = 0; col < 4 && rank < rows; ++col) {
    int sel = -1;
    for (int r = rank; r < rows; ++r)
      if (a[r][col] != 0) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    std::swap(a[sel], a[rank]);
    std::swap(b[sel], b[rank]);
    const long inv = inverse_mod(a[rank][col], p);
    for (int c = 0; c < 4; ++c) a[rank][c] = a[rank][c] * inv % p;
    b[rank] = b[rank] * inv % p;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || a[r][col] == 0) continue;
      const long f = a[r][col];
      for (int c = 0; c < 4; ++c) a[r][c] = ((a[r][c] - f * a[rank][c]) % p + p) % p;
      b[r] = ((b[r] - f * b[rank]) % p + p) % p;
    }
    out.pivot_col[rank++] = col;
  }
  for (int r = rank; r < rows; ++r)
    if (b[r] != 0) out.consistent = false;
  out.a = a;
  out.b = b;
  out.rank = rank;
  for (int c = 0; c < 4; ++c)
    if (std::find(out.pivot_col.begin(), out.pivot_col.end(), c) == out.pivot_col.end()) out.free_cols.push_back(c);
  return out;
}

// Monomials of degree <= 3 in the chart parameters (a, b, c, d).
constexpr int kParamMonomialCount = 35;

struct ParamMonomials {
  std::vector<Exponent> exps;
  std::vector<int> degree;
  int index[4][4][4][4];
  // index of e - e_var for the first variable present in e
  std::vector<int> pred, pred_var;
  // index of e + e_w, or -1 past degree 3
  std::vector<std::array<int, 4>> shift;

  ParamMonomials() {
    for (int deg = 0; deg <= 3; ++deg)
      for (int a = deg; a >= 0; --a)
        for (int b = deg - a; b >= 0; --b)
          for (int c = deg - a - b; c >= 0; --c) {
            const int d = deg - a - b - c;
            index[a][b][c][d] = static_cast<int>(exps.size());
            exps.push_back({a, b, c, d});
            degree.push_back(deg);
          }
    for (const auto& e : exps) {
      int v = 0;
      while (v < 4 && e[v] == 0) ++v;
      if (v == 4) {
        pred.push_back(-1);
        pred_var.push_back(-1);
      } else {
        Exponent f = e;
        --f[v];
        pred.push_back((*this)(f));
        pred_var.push_back(v);
      }
      std::array<int, 4> sh{-1, -1, -1, -1};
      if (e[0] + e[1] + e[2] + e[3] < 3)
        for (int w = 0; w < 4; ++w) {
          Exponent f = e;
          ++f[w];
          sh[w] = (*this)(f);
        }
      shift.push_back(sh);
    }
  }
  int operator()(const Exponent& e) const { return index[e[0]][e[1]][e[2]][e[3]]; }
};

const ParamMonomials& param_monomials() {
  static const ParamMonomials table;
  return table;
}

using ParamPoly = std::array<mpz_class, kParamMonomialCount>;

struct ParamTerm {
  int monomial;
  mpz_class coefficient;
};

// The four restriction equations of one chart as polynomials in (a, b, c, d).
class ChartSystem {
 public:
  ChartSystem(const CubicSurface& s, const LineChart& ch) {
    const auto& mons = param_monomials();
    std::array<ParamPoly, 4> dense;
    for (auto& poly : dense)
      for (auto& c : poly) c = 0;
    // entry of row 1 / row 2 at column v: -1 zero, 4 constant one, else parameter index
    auto entry = [&](int row, int v) {
      if (row == 0) return v == ch.i ? 4 : v == ch.k ? 0 : v == ch.l ? 1 : -1;
      return v == ch.j ? 4 : v == ch.k ? 2 : v == ch.l ? 3 : -1;
    };
    for (const auto& term : cubic_terms(s.coeffs)) {
      for (int choice = 0; choice < 8; ++choice) {
        Exponent e{0, 0, 0, 0};
        int t_count = 0;
        bool zero = false;
        for (int f = 0; f < 3 && !zero; ++f) {
          const int row = (choice >> f) & 1;
          t_count += row;
          const int en = entry(row, term.factors[f]);
          if (en < 0) zero = true;
          else if (en < 4) ++e[en];
        }
        if (!zero) dense[t_count][mons(e)] += term.coefficient;
      }
    }
    for (int i = 0; i < 4; ++i)
      for (int m = 0; m < kParamMonomialCount; ++m)
        if (dense[i][m] != 0) terms_[i].push_back({m, dense[i][m]});
  }

  // Coefficients of G_i(z) = R_i(x + M z).
  std::array<ParamPoly, 4> compose(const LineParams& x, const Matrix4& m) const {
    const auto& mons = param_monomials();
    thread_local std::vector<ParamPoly> prod(kParamMonomialCount);
    for (auto& poly : prod)
      for (auto& c : poly) c = 0;
    prod[0][0] = 1;
    mpz_class tmp;
    for (int e = 1; e < kParamMonomialCount; ++e) {
      const ParamPoly& base = prod[mons.pred[e]];
      const int v = mons.pred_var[e];
      for (int q = 0; q < kParamMonomialCount; ++q) {
        if (base[q] == 0) continue;
        // times the affine form x_v + sum_w m[v][w] z_w
        if (x[v] != 0) {
          mpz_mul(tmp.get_mpz_t(), base[q].get_mpz_t(), x[v].get_mpz_t());
          prod[e][q] += tmp;
        }
        for (int w = 0; w < 4; ++w) {
          if (m[v][w] == 0) continue;
          mpz_mul(tmp.get_mpz_t(), base[q].get_mpz_t(), m[v][w].get_mpz_t());
          prod[e][mons.shift[q][w]] += tmp;
        }
      }
    }
    std::array<ParamPoly, 4> out;
    for (int i = 0; i < 4; ++i) {
      for (auto& c : out[i]) c = 0;
      for (const auto& term : terms_[i]) {
        const ParamPoly& pr = prod[term.monomial];
        for (int q = 0; q < kParamMonomialCount; ++q) {
          if (pr[q] == 0) continue;
          mpz_mul(tmp.get_mpz_t(), pr[q].get_mpz_t(), term.coefficient.get_mpz_t());
          out[i][q] += tmp;
        }
      }
    }
    return out;
  }

  void evaluate(const LineParams& x, std::array<mpz_class, 4>& residual, Matrix4& jac) const {
    Matrix4 id;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) id[r][c] = r == c ? 1 : 0;
    const auto g = compose(x, id);
    const auto& mons = param_monomials();
    for (int i = 0; i < 4; ++i) {
      residual[i] = g[i][0];
      for (int v = 0; v < 4; ++v) jac[i][v] = g[i][mons.shift[0][v]];
    }
  }

 private:
  std::array<std::vector<ParamTerm>, 4> terms_;
};

// A residue cell x + M Z_p^4 of chart parameters.
struct Cell {
  LineParams x;
  Matrix4 m;
};

Matrix4 scaled(const Matrix4& m, const Matrix4& b) {
  Matrix4 out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      out[r][c] = 0;
      for (int q = 0; q < 4; ++q)
        if (b[q][c] != 0) out[r][c] += m[r][q] * b[q][c];
    }
  return out;
}

LineParams cell_point(const Cell& cell, const std::array<mpz_class, 4>& z) {
  LineParams out = cell.x;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out[r] += cell.m[r][c] * z[c];
  return out;
}

struct ReducedEquation {
  int row;
  int degree;
  std::vector<std::pair<int, long>> terms;  // (monomial, coefficient mod p)
};

// The equations G_i of a cell divided by their p-contents and reduced mod p.
struct CellReduction {
  std::array<int, 4> content{};
  std::vector<ReducedEquation> equations;
  bool empty = false;  // some equation is a nonzero constant mod p
};

CellReduction reduce_cell(const std::array<ParamPoly, 4>& g, long p) {
  const auto& mons = param_monomials();
  CellReduction out;
  for (int i = 0; i < 4; ++i) {
    int content = kInfiniteValuation;
    for (const auto& c : g[i])
      if (c != 0) content = std::min(content, valuation(c, p));
    out.content[i] = content;
    if (content == kInfiniteValuation) continue;
    const mpz_class& scale = prime_power(p, content);
    ReducedEquation eq{i, 0, {}};
    mpz_class q;
    for (int m = 0; m < kParamMonomialCount; ++m) {
      if (g[i][m] == 0) continue;
      mpz_divexact(q.get_mpz_t(), g[i][m].get_mpz_t(), scale.get_mpz_t());
      const long r = static_cast<long>(mpz_fdiv_ui(q.get_mpz_t(), static_cast<unsigned long>(p)));
      if (r == 0) continue;
      eq.terms.push_back({m, r});
      eq.degree = std::max(eq.degree, mons.degree[m]);
    }
    if (eq.degree == 0) {
      out.empty = true;
      return out;
    }
    out.equations.push_back(std::move(eq));
  }
  return out;
}

using Powers = std::array<std::array<long, 4>, 4>;

Powers powers_mod_p(const std::array<long, 4>& t, long p) {
  Powers tp;
  for (int v = 0; v < 4; ++v) {
    tp[v][0] = 1;
    for (int m = 1; m < 4; ++m) tp[v][m] = tp[v][m - 1] * t[v] % p;
  }
  return tp;
}

long eval_reduced(const std::vector<std::pair<int, long>>& terms, const Powers& tp, long p) {
  const auto& mons = param_monomials();
  long total = 0;
  for (auto [m, r] : terms) {
    const auto& e = mons.exps[m];
    total = (total + r * (tp[0][e[0]] * tp[1][e[1]] % p) % p * (tp[2][e[2]] * tp[3][e[3]] % p)) % p;
  }
  return total;
}

// Whether t is a zero of the reduced system with invertible Jacobian mod p.
bool nondegenerate_zero(const CellReduction& red, const std::array<long, 4>& t, long p) {
  if (red.equations.size() != 4) return false;
  const auto& mons = param_monomials();
  const Powers tp = powers_mod_p(t, p);
  std::array<std::array<long, 4>, 4> jac{};
  for (int i = 0; i < 4; ++i)
    for (auto [m, r] : red.equations[i].terms) {
      const auto& e = mons.exps[m];
      for (int v = 0; v < 4; ++v) {
        if (e[v] == 0) continue;
        long term = r * e[v] % p;
        for (int w = 0; w < 4; ++w) term = term * tp[w][e[w] - (w == v ? 1 : 0)] % p;
        jac[i][v] = (jac[i][v] + term) % p;
      }
    }
  return row_reduce(jac, {0, 0, 0, 0}, 4, p).rank == 4;
}

// Newton iteration in the coordinates z of a cell, from a nondegenerate zero
// t of the reduced system, until the chart parameters are known to at least
// 2 v(det J) + extra digits. Returns the parameters and their precision.
std::pair<LineParams, int> lift_in_cell(const ChartSystem& sys, const Cell& cell, const CellReduction& red,
                                        const std::array<long, 4>& t, long p, int extra, int& delta) {
  std::array<mpz_class, 4> z{t[0], t[1], t[2], t[3]};
  std::array<mpz_class, 4> res;
  Matrix4 jac;
  sys.evaluate(cell_point(cell, z), res, jac);
  delta = mpz_valuation(det4(jac), p);
  const int target = 2 * delta + extra;
  const int work = target + 4;
  const mpz_class& modulus = prime_power(p, work);
  for (int iter = 0; iter < 64; ++iter) {
    const LineParams x = cell_point(cell, z);
    sys.evaluate(x, res, jac);
    // H = D^-1 R and its Jacobian D^-1 J M in cell coordinates
    std::array<mpz_class, 4> h;
    int accuracy = work;
    for (int i = 0; i < 4; ++i) {
      mpz_divexact(h[i].get_mpz_t(), res[i].get_mpz_t(), prime_power(p, red.content[i]).get_mpz_t());
      accuracy = std::min(accuracy, mpz_valuation(h[i], p));
    }
    if (accuracy >= target) return {x, accuracy};
    Matrix4 jh = scaled(jac, cell.m);
    for (int i = 0; i < 4; ++i)
      for (auto& e : jh[i]) mpz_divexact(e.get_mpz_t(), e.get_mpz_t(), prime_power(p, red.content[i]).get_mpz_t());
    mpz_class inv = det4(jh);
    if (mpz_invert(inv.get_mpz_t(), inv.get_mpz_t(), modulus.get_mpz_t()) == 0)
      throw InternalInconsistency("lift_in_cell: Jacobian lost invertibility");
    const Matrix4 adj = adjugate(jh);
    for (int i = 0; i < 4; ++i) {
      mpz_class step = 0;
      for (int q = 0; q < 4; ++q) step += adj[i][q] * h[q];
      z[i] -= step * inv;
      mpz_fdiv_r(z[i].get_mpz_t(), z[i].get_mpz_t(), modulus.get_mpz_t());
    }
  }
  throw InternalInconsistency("lift_in_cell: no convergence from a nondegenerate zero");
}

}  // namespace

const std::array<LineChart, 6>& line_charts() {
  static const std::array<LineChart, 6> charts{{
      {0, 1, 2, 3},
      {0, 2, 1, 3},
      {0, 3, 1, 2},
      {1, 2, 0, 3},
      {1, 3, 0, 2},
      {2, 3, 0, 1},
  }};
  return charts;
}

std::array<mpz_class, 4> restrict_to_line(const CubicSurface& s, const LineChart& chart, const LineParams& params) {
  std::array<mpz_class, 4> r1, r2;
  make_rows(chart, params, r1, r2);
  const auto c = restrict_terms(cubic_terms(s.coeffs), 3, r1, r2, NoReduce{});
  return {c[0], c[1], c[2], c[3]};
}

bool is_smooth_over_fp(const CubicSurface& s) {
  const long p = s.p;
  const auto terms = terms_mod_p(s);
  if (terms.empty()) throw ZeroReduction("is_smooth_over_fp: surface vanishes mod p");
  std::array<std::vector<FormTerm<long>>, 4> grad;
  for (int w = 0; w < 4; ++w) {
    grad[w] = derivative_terms(terms, w);
    for (auto& t : grad[w]) t.coefficient %= p;
  }
  // points of P^3(F_p) with first nonzero coordinate 1
  for (int lead = 0; lead < 4; ++lead) {
    const int free = 3 - lead;
    long total = 1;
    for (int i = 0; i < free; ++i) total *= p;
    for (long code = 0; code < total; ++code) {
      std::array<long, 4> x{0, 0, 0, 0};
      x[lead] = 1;
      long rest = code;
      for (int v = lead + 1; v < 4; ++v) {
        x[v] = rest % p;
        rest /= p;
      }
      if (eval_mod_p(terms, x, p) != 0) continue;
      bool singular = true;
      for (int w = 0; w < 4 && singular; ++w) singular = eval_mod_p(grad[w], x, p) == 0;
      if (singular) return false;
    }
  }
  return true;
}

int fp_line_count(const CubicSurface& s) { return static_cast<int>(fp_lines(s).size()); }

PluckerVector PluckerVector::from_chart(const LineChart& chart, const LineParams& params, long p, int precision) {
  const auto minors = chart_minors(chart, params);
  auto coord = [&](int q) { return PadicScalar::with_absolute_precision(minors[q], p, precision); };
  PluckerVector out{{coord(0), coord(1), coord(2), coord(3), coord(4), coord(5)}};
  int best = -1, best_v = kInfiniteValuation;
  for (int q = 0; q < 6; ++q) {
    if (!out.coords[q].is_zero() && out.coords[q].valuation() < best_v) {
      best = q;
      best_v = out.coords[q].valuation();
    }
  }
  if (best < 0) throw PrecisionExhausted("PluckerVector: all coordinates vanish at working precision");
  const PadicScalar pivot = out.coords[best];
  for (auto& c : out.coords) c = c / pivot;
  return out;
}

PadicScalar PluckerVector::relation() const {
  return coords[0] * coords[5] - coords[1] * coords[4] + coords[2] * coords[3];
}

std::array<mpz_class, 6> PluckerVector::key(int digits) const {
  std::array<mpz_class, 6> out;
  const mpz_class& modulus = prime_power(coords[0].prime(), digits);
  for (int q = 0; q < 6; ++q) {
    out[q] = coords[q].is_zero() ? mpz_class(0) : coords[q].to_integer();
    mpz_fdiv_r(out[q].get_mpz_t(), out[q].get_mpz_t(), modulus.get_mpz_t());
  }
  return out;
}

PadicLineSet padic_lines(const CubicSurface& surface, const FanoOptions& opts) {
  const CubicSurface s = primitive_part(surface);
  const long p = s.p;
  PadicLineSet out;
  std::set<std::array<mpz_class, 6>> seen;

  Matrix4 identity;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) identity[r][c] = r == c ? 1 : 0;

  for (int ci = 0; ci < 6; ++ci) {
    const LineChart& chart = line_charts()[ci];
    const ChartSystem sys(s, chart);

    auto accept = [&](const Cell& cell, const CellReduction& red, const std::array<long, 4>& t) {
      int delta = 0;
      auto [x, digits] = lift_in_cell(sys, cell, red, t, p, opts.dedupe_digits, delta);
      out.max_jacobian_valuation = std::max(out.max_jacobian_valuation, delta);
      auto line = PluckerVector::from_chart(chart, x, p, digits);
      if (seen.insert(line.key(opts.dedupe_digits)).second) out.lines.push_back(std::move(line));
    };

    std::vector<Cell> level{Cell{LineParams{0, 0, 0, 0}, identity}};
    for (int depth = 0; !level.empty(); ++depth) {
      if (depth > opts.max_depth)
        throw DepthExceeded("padic_lines: candidates still unresolved at depth " + std::to_string(depth));
      out.deepest_level = std::max(out.deepest_level, depth);
      std::vector<Cell> next;
      for (const auto& cell : level) {
        const CellReduction red = reduce_cell(sys.compose(cell.x, cell.m), p);
        if (red.empty) continue;
        std::array<std::array<long, 4>, 4> lin{};
        std::array<long, 4> rhs{0, 0, 0, 0};
        int rows = 0;
        std::vector<const ReducedEquation*> nonlinear;
        const auto& mons = param_monomials();
        for (const auto& eq : red.equations) {
          if (eq.degree > 1) {
            nonlinear.push_back(&eq);
            continue;
          }
          for (auto [m, r] : eq.terms) {
            if (m == 0) rhs[rows] = (p - r) % p;
            else
              for (int v = 0; v < 4; ++v)
                if (mons.exps[m][v]) lin[rows][v] = r;
          }
          ++rows;
        }
        const LinearSolution sol = row_reduce(lin, rhs, rows, p);
        if (!sol.consistent) continue;

        auto child_at = [&](const std::array<long, 4>& t, const Matrix4& basis) {
          std::array<mpz_class, 4> z{t[0], t[1], t[2], t[3]};
          next.push_back(Cell{cell_point(cell, z), scaled(cell.m, basis)});
        };

        if (depth == 0 || !nonlinear.empty()) {
          Matrix4 cube;
          for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) cube[r][c] = r == c ? p : 0;
          const long count = sol.size(p);
          for (long code = 0; code < count; ++code) {
            const auto t = sol.point(code, p);
            if (!nonlinear.empty()) {
              const Powers tp = powers_mod_p(t, p);
              bool zero = true;
              for (const auto* eq : nonlinear)
                if (eval_reduced(eq->terms, tp, p) != 0) {
                  zero = false;
                  break;
                }
              if (!zero) continue;
            }
            if (depth == 0) {
              // lines whose reduction belongs to an earlier chart are found there
              auto minors = chart_minors(chart, t);
              for (auto& m : minors) ModP{p}(m);
              if (!canonical_in_chart(ci, minors, p)) continue;
            }
            if (nondegenerate_zero(red, t, p))
              accept(cell, red, t);
            else
              child_at(t, cube);
          }
        } else if (sol.rank == 4) {
          accept(cell, red, sol.point(0, p));
        } else {
          // keep the directions left free by the linear equations
          Matrix4 basis;
          for (auto& row : basis)
            for (auto& e : row) e = 0;
          for (int r = 0; r < sol.rank; ++r) basis[sol.pivot_col[r]][sol.pivot_col[r]] = p;
          for (int f : sol.free_cols) {
            basis[f][f] = 1;
            for (int r = 0; r < sol.rank; ++r) basis[sol.pivot_col[r]][f] = (p - sol.a[r][f]) % p;
          }
          child_at(sol.point(0, p), basis);
        }
      }
      if (depth + 1 > 3 && static_cast<int>(next.size()) > opts.max_live)
        throw DepthExceeded("padic_lines: " + std::to_string(next.size()) + " live candidates at depth " +
                            std::to_string(depth + 1));
      level = std::move(next);
    }
  }
  return out;
}

namespace {

// Every F_p-line on the reduction has an invertible Jacobian, so lines over
// Z_p and over F_p correspond one to one.
bool fp_lines_etale(const CubicSurface& s, const std::vector<FpLine>& lines) {
  std::array<mpz_class, 4> res;
  Matrix4 jac;
  for (const auto& line : lines) {
    const ChartSystem sys(s, line_charts()[line.chart]);
    LineParams x;
    for (int i = 0; i < 4; ++i) x[i] = line.params[i];
    sys.evaluate(x, res, jac);
    if (mpz_fdiv_ui(det4(jac).get_mpz_t(), static_cast<unsigned long>(s.p)) == 0) return false;
  }
  return true;
}

}  // namespace

int count_padic_lines(const CubicSurface& surface, const FanoOptions& opts) {
  const CubicSurface s = primitive_part(surface);
  int count = -1;
  if (opts.allow_fast_path && is_smooth_over_fp(s)) {
    const auto lines = fp_lines(s);
    if (fp_lines_etale(s, lines)) count = static_cast<int>(lines.size());
  }
  if (count < 0) count = static_cast<int>(padic_lines(s, opts).lines.size());
  if (!is_admissible_line_count(count))
    throw SingularSurface("count_padic_lines: " + std::to_string(count) + " lines is not an admissible count");
  return count;
}

}  // namespace cubiclines
