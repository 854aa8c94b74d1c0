#include "cubiclines/real_cubics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include <Eigen/Dense>

#include "cubiclines/errors.hpp"
#include "cubiclines/line_counts.hpp"
#include "cubiclines/parallel.hpp"

namespace cubiclines {

namespace {

using cd = std::complex<double>;

mpq_class gaussian_moment(int k) {
  if (k % 2) return 0;
  mpq_class m = 1;
  for (int j = k - 1; j > 1; j -= 2) m *= j;
  return m;
}

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(std::vector<std::vector<mpq_class>>& rows, int cols) {
  std::vector<int> pivots;
  std::size_t r = 0;
  for (int c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    const mpq_class inv = 1 / rows[r][c];
    for (auto& x : rows[r]) x *= inv;
    for (std::size_t o = 0; o < rows.size(); ++o) {
      if (o == r || rows[o][c] == 0) continue;
      const mpq_class factor = rows[o][c];
      for (int k = 0; k < cols; ++k) rows[o][k] -= factor * rows[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

RealCoeffs to_real(const RatCubic& f, double scale) {
  RealCoeffs out{};
  for (int m = 0; m < kCubicMonomialCount; ++m) out[m] = f[m].get_d() * scale;
  return out;
}

void gram_schmidt(std::vector<RatCubic>& vs, std::vector<mpq_class>& norms) {
  norms.clear();
  for (std::size_t k = 0; k < vs.size(); ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      const mpq_class coeff = gaussian_inner_product(vs[k], vs[j]) / norms[j];
      for (int m = 0; m < kCubicMonomialCount; ++m) vs[k][m] -= coeff * vs[j][m];
    }
    norms.push_back(gaussian_inner_product(vs[k], vs[k]));
  }
}

// Degree-3 monomials in (w0, a, b, c, d), as sorted index triples.
struct TripleTable {
  std::array<std::array<int, 3>, 35> triples{};
  int index[5][5][5]{};
  TripleTable() {
    int n = 0;
    for (int i = 0; i < 5; ++i)
      for (int j = i; j < 5; ++j)
        for (int k = j; k < 5; ++k) {
          triples[n] = {i, j, k};
          for (auto [x, y, z] : {std::array{i, j, k}, {i, k, j}, {j, i, k}, {j, k, i}, {k, i, j}, {k, j, i}})
            index[x][y][z] = n;
          ++n;
        }
  }
};

const TripleTable& triple_table() {
  static const TripleTable t;
  return t;
}

// f(s r1 + t r2) with r1 = w0 e0 + a e2 + b e3, r2 = w0 e1 + c e2 + d e3;
// equation k is the coefficient of s^(3-k) t^k, homogeneous of degree 3 in w.
using ChartSystem = std::array<std::array<double, 35>, 4>;

ChartSystem chart_system(const RealCoeffs& f) {
  constexpr int kNone = -1;
  constexpr int on_s[4] = {0, kNone, 1, 2};
  constexpr int on_t[4] = {kNone, 0, 3, 4};
  const auto& table = triple_table();
  ChartSystem sys{};
  for (const auto& term : cubic_terms(f)) {
    for (int choice = 0; choice < 8; ++choice) {
      int vars[3], ts = 0;
      bool ok = true;
      for (int q = 0; q < 3; ++q) {
        const bool t = (choice >> q) & 1;
        vars[q] = t ? on_t[term.factors[q]] : on_s[term.factors[q]];
        ts += t;
        ok = ok && vars[q] != kNone;
      }
      if (ok) sys[ts][table.index[vars[0]][vars[1]][vars[2]]] += term.coefficient;
    }
  }
  return sys;
}

RealCoeffs max_normalized(const RealCoeffs& f) {
  double scale = 0;
  for (double c : f) scale = std::max(scale, std::abs(c));
  if (!(scale > 0) || !std::isfinite(scale)) throw std::invalid_argument("cubic form must be nonzero and finite");
  RealCoeffs out = f;
  for (auto& c : out) c /= scale;
  return out;
}

using Vec5 = Eigen::Matrix<cd, 5, 1>;
using Mat5 = Eigen::Matrix<cd, 5, 5>;
using Vec4 = Eigen::Matrix<cd, 4, 1>;
using Mat4 = Eigen::Matrix<cd, 4, 4>;

// Values and Jacobian of the homogeneous chart system at w.
void evaluate_system(const ChartSystem& sys, const Vec5& w, Vec4& value, Eigen::Matrix<cd, 4, 5>& jac) {
  const auto& table = triple_table();
  value.setZero();
  jac.setZero();
  for (int m = 0; m < 35; ++m) {
    const auto [i, j, k] = table.triples[m];
    const cd wij = w[i] * w[j], wik = w[i] * w[k], wjk = w[j] * w[k];
    const cd mono = wij * w[k];
    for (int e = 0; e < 4; ++e) {
      const double c = sys[e][m];
      if (c == 0) continue;
      value[e] += c * mono;
      jac(e, i) += c * wjk;
      jac(e, j) += c * wik;
      jac(e, k) += c * wij;
    }
  }
}

double affine_norm(const Vec4& z) {
  double n = 0;
  for (int i = 0; i < 4; ++i) n = std::max(n, std::abs(z[i]));
  return n;
}

double affine_residual(const ChartSystem& sys, const Vec4& z) {
  Vec5 w;
  w << 1.0, z;
  Vec4 value;
  Eigen::Matrix<cd, 4, 5> jac;
  evaluate_system(sys, w, value, jac);
  return affine_norm(value) / std::pow(1 + affine_norm(z), 3);
}

Vec4 affine_newton(const ChartSystem& sys, const Vec4& z) {
  Vec5 w;
  w << 1.0, z;
  Vec4 value;
  Eigen::Matrix<cd, 4, 5> jac;
  evaluate_system(sys, w, value, jac);
  const Mat4 j4 = jac.rightCols<4>();
  return z - j4.partialPivLu().solve(value);
}

struct Homotopy {
  const ChartSystem& target;
  cd gamma;
  Vec5 patch;

  // H(w, t) = (1 - t) gamma G(w) + t F(w), G_i = w_{i+1}^3 - w0^3, plus the patch c.w = 1.
  void evaluate(const Vec5& w, double t, Vec5& h, Mat5& jac, Vec5& ht) const {
    Vec4 f;
    Eigen::Matrix<cd, 4, 5> jf;
    evaluate_system(target, w, f, jf);
    const cd w0sq = w[0] * w[0];
    for (int i = 0; i < 4; ++i) {
      const cd zsq = w[i + 1] * w[i + 1];
      const cd g = zsq * w[i + 1] - w0sq * w[0];
      h[i] = (1 - t) * gamma * g + t * f[i];
      ht[i] = f[i] - gamma * g;
      for (int v = 0; v < 5; ++v) jac(i, v) = t * jf(i, v);
      jac(i, 0) += (1 - t) * gamma * (-3.0 * w0sq);
      jac(i, i + 1) += (1 - t) * gamma * (3.0 * zsq);
    }
    h[4] = patch.dot(w) - 1.0;  // dot conjugates its first argument; patch is stored conjugated
    jac.row(4) = patch.adjoint();
    ht[4] = 0;
  }
};

enum class PathEnd { Finite, Infinite, Failed };

struct PathResult {
  PathEnd end = PathEnd::Failed;
  Vec5 w;
  double t = 0;
};

bool at_infinity(const Vec5& w, double cutoff) {
  double z = 0;
  for (int i = 1; i < 5; ++i) z = std::max(z, std::abs(w[i]));
  return z > cutoff * std::abs(w[0]);
}

PathResult track(const Homotopy& hom, Vec5 w, const RealSolveOptions& opts) {
  double t = 0, h = opts.max_step / 4;
  int successes = 0;
  Vec5 value, ht;
  Mat5 jac;
  while (t < 1) {
    h = std::min(h, 1 - t);
    hom.evaluate(w, t, value, jac, ht);
    Eigen::PartialPivLU<Mat5> lu(jac);
    const Vec5 dw = lu.solve(-ht);
    const double t1 = h >= 1 - t ? 1.0 : t + h;
    Vec5 w1 = w + (t1 - t) * dw;
    bool converged = false;
    const double scale = w.norm();
    for (int it = 0; it < 3; ++it) {
      hom.evaluate(w1, t1, value, jac, ht);
      const Vec5 delta = Eigen::PartialPivLU<Mat5>(jac).solve(-value);
      if (!delta.allFinite()) break;
      w1 += delta;
      const double size = delta.norm();
      if (it == 0 && size > 0.1 * scale) break;
      if (size <= 1e-9 * (1 + w1.norm())) {
        converged = true;
        break;
      }
    }
    if (converged) {
      w = w1;
      t = t1;
      if (++successes >= 3) {
        h = std::min(2 * h, opts.max_step);
        successes = 0;
      }
      if (at_infinity(w, opts.divergence_norm)) return {PathEnd::Infinite, w, t};
    } else {
      h /= 2;
      successes = 0;
      if (h < opts.min_step) return {at_infinity(w, 1e4) ? PathEnd::Infinite : PathEnd::Failed, w, t};
    }
  }
  return {PathEnd::Finite, w, t};
}

std::optional<Vec4> refine(const ChartSystem& sys, Vec4 z, const RealSolveOptions& opts) {
  for (int it = 0; it < 30; ++it) {
    if (!z.allFinite() || affine_norm(z) > opts.divergence_norm) return std::nullopt;
    if (affine_residual(sys, z) < opts.residual_tolerance) return z;
    z = affine_newton(sys, z);
  }
  return std::nullopt;
}

bool is_real_point(const Vec4& z, double tol) {
  double worst = 0;
  for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(z[i].imag()) / (1 + std::abs(z[i].real())));
  return worst < tol;
}

RealMatrix4 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::Matrix4d g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::Matrix4d> qr(g);
  Eigen::Matrix4d q = qr.householderQ();
  const Eigen::Matrix4d r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < 4; ++j)
    if (r(j, j) < 0) q.col(j) *= -1;
  RealMatrix4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = q(i, j);
  return out;
}

cd random_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi);
  return std::polar(1.0, angle(rng));
}

Vec4 to_vec(const LinePoint& z) {
  Vec4 v;
  for (int i = 0; i < 4; ++i) v[i] = z[i];
  return v;
}

LinePoint to_point(const Vec4& v) {
  LinePoint z;
  for (int i = 0; i < 4; ++i) z[i] = v[i];
  return z;
}

std::optional<RealLineSolution> solve_once(const RealCoeffs& f, std::mt19937_64& rng, const RealSolveOptions& opts) {
  RealLineSolution sol;
  sol.rotation = random_rotation(rng);
  sol.rotated = max_normalized(substitute_linear(f, sol.rotation));
  const ChartSystem sys = chart_system(sol.rotated);

  std::normal_distribution<double> normal;
  Homotopy hom{sys, random_unit(rng), {}};
  for (int i = 0; i < 5; ++i) hom.patch[i] = cd(normal(rng), normal(rng));

  const cd roots[3] = {1.0, std::polar(1.0, 2 * std::numbers::pi / 3), std::polar(1.0, -2 * std::numbers::pi / 3)};
  std::vector<Vec4> found;
  for (int code = 0; code < 81; ++code) {
    Vec5 w;
    w[0] = 1.0;
    for (int i = 0, c = code; i < 4; ++i, c /= 3) w[i + 1] = roots[c % 3];
    w /= hom.patch.dot(w);
    const PathResult path = track(hom, w, opts);
    // A path stalled just short of t = 1 is handed to Newton at t = 1; only
    // verified roots survive refinement, so nothing spurious is admitted.
    const bool stalled = path.end == PathEnd::Failed && path.t > 1 - 1e-4;
    if (path.end != PathEnd::Finite && !stalled) continue;
    if (at_infinity(path.w, opts.divergence_norm)) continue;
    const auto z = refine(sys, path.w.tail<4>() / path.w[0], opts);
    if (!z) continue;
    bool duplicate = false;
    for (const auto& other : found)
      duplicate = duplicate || (other - *z).cwiseAbs().maxCoeff() < opts.dedupe_radius * (1 + affine_norm(*z));
    if (!duplicate) found.push_back(*z);
  }
  if (found.size() != 27) return std::nullopt;
  for (const auto& z : found) {
    sol.lines.push_back(to_point(z));
    sol.real.push_back(is_real_point(z, opts.real_tolerance));
  }
  // Non-real lines come in conjugate pairs; an unpaired one means a
  // near-real pair was misclassified, so the attempt is redone.
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (sol.real[i]) continue;
    const Vec4 conj = found[i].conjugate();
    bool paired = false;
    for (std::size_t j = 0; j < found.size() && !paired; ++j)
      paired = j != i && !sol.real[j] &&
               (found[j] - conj).cwiseAbs().maxCoeff() < opts.real_tolerance * (1 + affine_norm(found[i]));
    if (!paired) return std::nullopt;
  }
  if (!is_real_line_count(sol.real_count())) return std::nullopt;
  return sol;
}

}  // namespace

const GramMatrix& gram_matrix() {
  static const GramMatrix gram = [] {
    GramMatrix g;
    const auto& mons = cubic_monomials();
    for (int a = 0; a < kCubicMonomialCount; ++a)
      for (int b = 0; b < kCubicMonomialCount; ++b) {
        mpq_class e = 1;
        for (int v = 0; v < 4; ++v) e *= gaussian_moment(mons[a][v] + mons[b][v]);
        g[a][b] = e;
      }
    return g;
  }();
  return gram;
}

mpq_class gaussian_inner_product(const RatCubic& f, const RatCubic& g) {
  const auto& gram = gram_matrix();
  mpq_class total = 0;
  for (int a = 0; a < kCubicMonomialCount; ++a) {
    if (f[a] == 0) continue;
    for (int b = 0; b < kCubicMonomialCount; ++b)
      if (g[b] != 0 && gram[a][b] != 0) total += f[a] * g[b] * gram[a][b];
  }
  return total;
}

std::array<mpq_class, 4> laplacian(const RatCubic& f) {
  std::array<mpq_class, 4> out;
  const auto& mons = cubic_monomials();
  for (int m = 0; m < kCubicMonomialCount; ++m)
    for (int v = 0; v < 4; ++v) {
      if (mons[m][v] < 2) continue;
      Exponent rest = mons[m];
      rest[v] -= 2;
      const int target = static_cast<int>(std::max_element(rest.begin(), rest.end()) - rest.begin());
      out[target] += f[m] * mons[m][v] * (mons[m][v] - 1);
    }
  return out;
}

const HarmonicBasis& harmonic_basis() {
  static const HarmonicBasis basis = [] {
    HarmonicBasis hb;
    std::vector<std::vector<mpq_class>> rows(4, std::vector<mpq_class>(kCubicMonomialCount));
    for (int m = 0; m < kCubicMonomialCount; ++m) {
      RatCubic e;
      e[m] = 1;
      const auto lap = laplacian(e);
      for (int v = 0; v < 4; ++v) rows[v][m] = lap[v];
    }
    const auto pivots = rref(rows, kCubicMonomialCount);
    for (int free = 0; free < kCubicMonomialCount; ++free) {
      if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
      RatCubic v;
      v[free] = 1;
      for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -rows[r][free];
      hb.b3_exact.push_back(v);
    }
    for (int j = 0; j < 4; ++j) {
      RatCubic v;
      for (int i = 0; i < 4; ++i) {
        Exponent e{0, 0, 0, 0};
        e[i] += 2;
        e[j] += 1;
        v[monomial_index(e)] += 1;
      }
      hb.b1_exact.push_back(v);
    }
    gram_schmidt(hb.b3_exact, hb.b3_norm_sq);
    gram_schmidt(hb.b1_exact, hb.b1_norm_sq);
    for (std::size_t k = 0; k < hb.b3_exact.size(); ++k)
      hb.b3.push_back(to_real(hb.b3_exact[k], 1 / std::sqrt(hb.b3_norm_sq[k].get_d())));
    for (std::size_t k = 0; k < hb.b1_exact.size(); ++k)
      hb.b1.push_back(to_real(hb.b1_exact[k], 1 / std::sqrt(hb.b1_norm_sq[k].get_d())));
    return hb;
  }();
  return basis;
}

RealCubic sample_real_cubic(double lambda, std::mt19937_64& rng) {
  if (!(lambda > 0 && lambda < 1)) throw std::invalid_argument("sample_real_cubic: lambda must lie in (0, 1)");
  const auto& hb = harmonic_basis();
  std::normal_distribution<double> normal;
  RealCubic out;
  out.lambda = lambda;
  for (const auto& b : hb.b3) {
    const double xi = lambda * normal(rng);
    for (int m = 0; m < kCubicMonomialCount; ++m) out.coeffs[m] += xi * b[m];
  }
  for (const auto& b : hb.b1) {
    const double eta = (1 - lambda) * normal(rng);
    for (int m = 0; m < kCubicMonomialCount; ++m) out.coeffs[m] += eta * b[m];
  }
  return out;
}

double evaluate(const RealCoeffs& f, const std::array<double, 4>& x) {
  double total = 0;
  const auto& mons = cubic_monomials();
  for (int m = 0; m < kCubicMonomialCount; ++m) {
    double term = f[m];
    for (int v = 0; v < 4; ++v)
      for (int e = 0; e < mons[m][v]; ++e) term *= x[v];
    total += term;
  }
  return total;
}

RealCoeffs clebsch_cubic() {
  // sum x_i^3 - (sum x_i)^3
  RealCoeffs f{};
  const auto& mons = cubic_monomials();
  for (int m = 0; m < kCubicMonomialCount; ++m) {
    double multinomial = 6;
    for (int v = 0; v < 4; ++v) multinomial /= std::tgamma(mons[m][v] + 1);
    f[m] = -multinomial;
    if (multinomial == 1) f[m] = 0;
  }
  return f;
}

RealCoeffs fermat_cubic() {
  RealCoeffs f{};
  for (int v = 0; v < 4; ++v) {
    Exponent e{0, 0, 0, 0};
    e[v] = 3;
    f[monomial_index(e)] = 1;
  }
  return f;
}

int RealLineSolution::real_count() const { return static_cast<int>(std::count(real.begin(), real.end(), true)); }

RealLineSolution solve_real_lines(const RealCoeffs& f, std::mt19937_64& rng, const RealSolveOptions& opts) {
  for (int attempt = 0; attempt <= opts.retries; ++attempt) {
    if (auto sol = solve_once(f, rng, opts)) {
      sol->attempts = attempt + 1;
      return *sol;
    }
  }
  throw SolveFailure("homotopy did not produce 27 finite solutions");
}

int count_real_lines(const RealCoeffs& f, std::mt19937_64& rng, const RealSolveOptions& opts) {
  const int n = solve_real_lines(f, rng, opts).real_count();
  if (!is_real_line_count(n)) throw NonAdmissibleCount("real line count " + std::to_string(n));
  return n;
}

double chart_residual(const RealCoeffs& f, const LinePoint& z) {
  return affine_residual(chart_system(max_normalized(f)), to_vec(z));
}

LinePoint chart_newton_step(const RealCoeffs& f, const LinePoint& z) {
  return to_point(affine_newton(chart_system(max_normalized(f)), to_vec(z)));
}

double SimplexCurvePoint::mean() const {
  double m = 0;
  for (int i = 0; i < 4; ++i) m += kRealLineCounts[i] * probabilities[i];
  return m;
}

std::vector<SimplexCurvePoint> estimate_curve(const std::vector<double>& lambdas, int n_samples, std::uint64_t seed,
                                              int workers) {
  if (n_samples < 1) throw std::invalid_argument("estimate_curve: n_samples must be positive");
  for (double l : lambdas)
    if (!(l > 0 && l < 1)) throw std::invalid_argument("estimate_curve: lambda must lie in (0, 1)");
  const std::size_t total = lambdas.size() * static_cast<std::size_t>(n_samples);
  std::vector<int> results(total, 0);
  parallel_for(total, workers, [&](std::size_t i) {
    auto rng = sample_rng(seed, i);
    const RealCubic f = sample_real_cubic(lambdas[i / n_samples], rng);
    try {
      results[i] = count_real_lines(f.coeffs, rng);
    } catch (const SolveFailure&) {
      results[i] = -1;
    }
  });
  std::vector<SimplexCurvePoint> curve;
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    SimplexCurvePoint pt;
    pt.lambda = lambdas[l];
    pt.n_samples = n_samples;
    for (int s = 0; s < n_samples; ++s) {
      const int r = results[l * n_samples + s];
      if (r < 0) {
        ++pt.n_failures;
        continue;
      }
      ++pt.counts[std::find(kRealLineCounts.begin(), kRealLineCounts.end(), r) - kRealLineCounts.begin()];
    }
    const int counted = n_samples - pt.n_failures;
    for (int i = 0; i < 4 && counted > 0; ++i) pt.probabilities[i] = static_cast<double>(pt.counts[i]) / counted;
    curve.push_back(pt);
  }
  return curve;
}

}  // namespace cubiclines
