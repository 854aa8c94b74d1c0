#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "cubiclines/cubic_surface.hpp"

namespace cubiclines {

using RatCubic = std::array<mpq_class, kCubicMonomialCount>;
using RealCoeffs = std::array<double, kCubicMonomialCount>;
using RealMatrix4 = std::array<std::array<double, 4>, 4>;

// <x^a, x^b> = prod_i E[Z^(a_i + b_i)] for standard Gaussian Z.
using GramMatrix = std::array<std::array<mpq_class, kCubicMonomialCount>, kCubicMonomialCount>;
const GramMatrix& gram_matrix();

mpq_class gaussian_inner_product(const RatCubic& f, const RatCubic& g);

// Laplacian of a cubic form, as coefficients of x0..x3.
std::array<mpq_class, 4> laplacian(const RatCubic& f);

// V = H3 + |x|^2 H1, orthogonal under the Gaussian inner product.
// The exact vectors are pairwise orthogonal with the recorded squared norms;
// the floating vectors are those divided by the norms' square roots.
struct HarmonicBasis {
  std::vector<RatCubic> b3_exact, b1_exact;
  std::vector<mpq_class> b3_norm_sq, b1_norm_sq;
  std::vector<RealCoeffs> b3, b1;
};
const HarmonicBasis& harmonic_basis();

struct RealCubic {
  RealCoeffs coeffs{};
  double lambda = 0;
  std::uint64_t seed = 0;
};

// lambda * sum xi_i H3_i + (1 - lambda) * sum eta_j H1_j, 0 < lambda < 1.
RealCubic sample_real_cubic(double lambda, std::mt19937_64& rng);

// Kostlan distribution corresponds to lambda = 1/3.
inline constexpr double kKostlanLambda = 1.0 / 3.0;

double evaluate(const RealCoeffs& f, const std::array<double, 4>& x);

RealCoeffs clebsch_cubic();
RealCoeffs fermat_cubic();

struct RealSolveOptions {
  int retries = 3;
  double min_step = 1e-8;
  double max_step = 0.05;
  double divergence_norm = 1e8;
  double real_tolerance = 1e-6;
  double dedupe_radius = 1e-8;
  double residual_tolerance = 1e-12;
};

using LinePoint = std::array<std::complex<double>, 4>;  // chart parameters a, b, c, d

struct RealLineSolution {
  RealCoeffs rotated{};        // f(Q y) for the orthogonal Q used
  RealMatrix4 rotation{};
  std::vector<LinePoint> lines;  // 27 finite solutions in the chart of the rotated cubic
  std::vector<bool> real;
  int attempts = 0;
  int real_count() const;
};

// Total-degree homotopy in the chart x = s(e0 + a e2 + b e3) + t(e1 + c e2 + d e3)
// after a random orthogonal change of variables. Throws SolveFailure.
RealLineSolution solve_real_lines(const RealCoeffs& f, std::mt19937_64& rng, const RealSolveOptions& opts = {});

// Number of real lines, in {3, 7, 15, 27}. Throws SolveFailure or NonAdmissibleCount.
int count_real_lines(const RealCoeffs& f, std::mt19937_64& rng, const RealSolveOptions& opts = {});

// Residuals of the four chart equations of f at a point, scaled by (1 + |z|)^3.
double chart_residual(const RealCoeffs& f, const LinePoint& z);

// One Newton step on the chart equations of f.
LinePoint chart_newton_step(const RealCoeffs& f, const LinePoint& z);

struct SimplexCurvePoint {
  double lambda = 0;
  std::array<double, 4> probabilities{};  // pi_3, pi_7, pi_15, pi_27
  std::array<int, 4> counts{};
  int n_samples = 0;
  int n_failures = 0;
  double mean() const;
};

std::vector<SimplexCurvePoint> estimate_curve(const std::vector<double>& lambdas, int n_samples, std::uint64_t seed,
                                              int workers = 1);

}  // namespace cubiclines
