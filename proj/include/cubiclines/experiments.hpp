#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cubiclines/cubic_surface.hpp"
#include "cubiclines/padic_poly.hpp"
#include "cubiclines/real_cubics.hpp"

namespace cubiclines {

enum class Measure { Haar, Blowup, Tropical, TropicalGeneric, Real };

std::string measure_name(Measure m);
// Throws std::invalid_argument on unknown names.
Measure parse_measure(const std::string& name);

struct MeasureSpec {
  Measure kind = Measure::Haar;
  long p = 7;
  int precision = 20;  // N
  double lambda = kKostlanLambda;
};

// Throws std::invalid_argument when the fields do not fit the kind.
void validate(const MeasureSpec& spec);

inline constexpr long kDefaultPrime = 7;
inline constexpr long kDefaultSamples = 10000;
inline constexpr int kDefaultTropicalPrecision = 5;
inline constexpr int kDefaultSamplingPrecision = 20;

// 20 uniform integers in [0, p^(N+1)).
CubicSurface sample_haar(long p, int precision, std::mt19937_64& rng);

// Uniform degree-6 polynomial in general position. Degenerate draws are
// redrawn; the number of redraws is added to *resamples when given.
PadicPolynomial sample_blowup(long p, int precision, std::mt19937_64& rng, long* resamples = nullptr);

// Coefficients p^v (plain) or u p^v with u a unit mod p^(N+1) (generic), v uniform in {0..N}.
CubicSurface sample_tropical(long p, int precision, bool generic, std::mt19937_64& rng);

struct LineCountDistribution {
  MeasureSpec spec;
  std::uint64_t seed = 0;
  long samples = 0;
  long failures = 0;
  long resamples = 0;
  std::map<std::string, long> failure_kinds;
  std::map<int, long> counts;  // every value of the support, including zeros

  long counted() const { return samples - failures; }
  double probability(int count) const;
  double mean() const;
  std::vector<int> support() const;
};

LineCountDistribution run_padic_experiment(const MeasureSpec& spec, long n, std::uint64_t seed, int workers = 1);

LineCountDistribution run_real_experiment(double lambda, long n, std::uint64_t seed, int workers = 1);

LineCountDistribution distribution_from_curve_point(const SimplexCurvePoint& pt, std::uint64_t seed);

// CSV `count,probability` and the metadata sidecar, 5 decimals.
std::string distribution_csv(const LineCountDistribution& d);
std::string distribution_metadata_json(const LineCountDistribution& d);

std::string curve_csv(const std::vector<SimplexCurvePoint>& curve);
std::vector<SimplexCurvePoint> parse_curve_csv(const std::string& text);
std::string curve_metadata_json(const std::vector<SimplexCurvePoint>& curve, long samples, std::uint64_t seed);

// The curve in the probability simplex, projected to the plane.
std::string curve_svg(const std::vector<SimplexCurvePoint>& curve);

// {"p": int, "precision": int, "coeffs": [20 integers]}; coefficients may be JSON numbers or decimal strings.
CubicSurface parse_surface_json(const std::string& text, std::optional<long> p_override = std::nullopt);
std::string surface_json(const CubicSurface& s);

// Parses "a:b:step" into a, a + step, ... <= b (with a small tolerance).
std::vector<double> parse_lambda_grid(const std::string& text);

}  // namespace cubiclines
