#include "cubiclines/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "cubiclines/blowup.hpp"
#include "cubiclines/errors.hpp"
#include "cubiclines/fano_padic.hpp"
#include "cubiclines/line_counts.hpp"
#include "cubiclines/padic.hpp"
#include "cubiclines/parallel.hpp"

namespace cubiclines {

namespace {

using nlohmann::json;

// Uniform in [0, p^digits), built digit by digit.
mpz_class uniform_digits(long p, int digits, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> digit(0, p - 1);
  mpz_class out = 0;
  for (int i = 0; i < digits; ++i) out = out * p + digit(rng);
  return out;
}

mpz_class uniform_unit(long p, int digits, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> first(1, p - 1);
  return uniform_digits(p, digits - 1, rng) * p + first(rng);
}

std::string fixed5(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5f", x);
  return buf;
}

// Rounded to 5 decimals.
json number5(double x) { return json::parse(fixed5(x)); }

constexpr int kFailure = -1;

}  // namespace

std::string measure_name(Measure m) {
  switch (m) {
    case Measure::Haar: return "haar";
    case Measure::Blowup: return "blowup";
    case Measure::Tropical: return "tropical";
    case Measure::TropicalGeneric: return "tropical-generic";
    case Measure::Real: return "real";
  }
  return "";
}

Measure parse_measure(const std::string& name) {
  for (Measure m : {Measure::Haar, Measure::Blowup, Measure::Tropical, Measure::TropicalGeneric, Measure::Real})
    if (measure_name(m) == name) return m;
  throw std::invalid_argument("unknown measure: " + name);
}

void validate(const MeasureSpec& spec) {
  if (spec.kind == Measure::Real) {
    if (!(spec.lambda > 0 && spec.lambda < 1)) throw std::invalid_argument("lambda must lie in (0, 1)");
    return;
  }
  require_odd_prime(spec.p);
  const bool tropical = spec.kind == Measure::Tropical || spec.kind == Measure::TropicalGeneric;
  if (spec.precision < (tropical ? 1 : 0)) throw std::invalid_argument("precision out of range");
}

CubicSurface sample_haar(long p, int precision, std::mt19937_64& rng) {
  for (;;) {
    CubicCoeffs f;
    bool nonzero = false;
    for (auto& c : f) {
      c = uniform_digits(p, precision + 1, rng);
      nonzero = nonzero || c != 0;
    }
    if (nonzero) return make_surface(p, precision, f);
  }
}

PadicPolynomial sample_blowup(long p, int precision, std::mt19937_64& rng, long* resamples) {
  for (;;) {
    IntPoly f(7);
    for (auto& c : f) c = uniform_digits(p, precision + 1, rng);
    if (f[6] != 0) {
      PadicPolynomial poly(p, f);
      if (general_position_check(poly).overall) return poly;
    }
    if (resamples) ++*resamples;
  }
}

CubicSurface sample_tropical(long p, int precision, bool generic, std::mt19937_64& rng) {
  if (precision < 1) throw std::invalid_argument("sample_tropical: N must be at least 1");
  std::uniform_int_distribution<int> valuation(0, precision);
  CubicCoeffs f;
  for (auto& c : f) {
    c = prime_power(p, valuation(rng));
    if (generic) c *= uniform_unit(p, precision + 1, rng);
  }
  return make_surface(p, precision, f);
}

double LineCountDistribution::probability(int count) const {
  const auto it = counts.find(count);
  if (it == counts.end() || counted() == 0) return 0;
  return static_cast<double>(it->second) / static_cast<double>(counted());
}

double LineCountDistribution::mean() const {
  double m = 0;
  for (const auto& [count, n] : counts) m += count * probability(count);
  return m;
}

std::vector<int> LineCountDistribution::support() const {
  std::vector<int> out;
  for (const auto& [count, n] : counts)
    if (n > 0) out.push_back(count);
  return out;
}

LineCountDistribution run_padic_experiment(const MeasureSpec& spec, long n, std::uint64_t seed, int workers) {
  validate(spec);
  if (spec.kind == Measure::Real) throw std::invalid_argument("run_padic_experiment: real measure");
  if (n < 1) throw std::invalid_argument("sample count must be positive");
  std::vector<int> results(n, kFailure);
  std::vector<long> resamples(n, 0);
  std::vector<std::string> errors(n);
  parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t i) {
    auto rng = sample_rng(seed, i);
    try {
      switch (spec.kind) {
        case Measure::Blowup:
          results[i] = blowup_line_count(sample_blowup(spec.p, spec.precision, rng, &resamples[i]));
          break;
        case Measure::Haar:
          results[i] = count_padic_lines(sample_haar(spec.p, spec.precision, rng));
          break;
        default:
          results[i] = count_padic_lines(sample_tropical(spec.p, spec.precision, spec.kind == Measure::TropicalGeneric, rng));
      }
    } catch (const DepthExceeded&) {
      errors[i] = "DepthExceeded";
    } catch (const SingularSurface&) {
      errors[i] = "SingularSurface";
    } catch (const PrecisionExhausted&) {
      errors[i] = "PrecisionExhausted";
    }
  });
  LineCountDistribution d;
  d.spec = spec;
  d.seed = seed;
  d.samples = n;
  for (int c : kAdmissibleLineCounts) d.counts[c] = 0;
  for (long i = 0; i < n; ++i) {
    d.resamples += resamples[i];
    if (results[i] == kFailure) {
      ++d.failures;
      ++d.failure_kinds[errors[i]];
    } else {
      ++d.counts[results[i]];
    }
  }
  return d;
}

LineCountDistribution distribution_from_curve_point(const SimplexCurvePoint& pt, std::uint64_t seed) {
  LineCountDistribution d;
  d.spec.kind = Measure::Real;
  d.spec.lambda = pt.lambda;
  d.seed = seed;
  d.samples = pt.n_samples;
  d.failures = pt.n_failures;
  if (pt.n_failures) d.failure_kinds["SolveFailure"] = pt.n_failures;
  for (int i = 0; i < 4; ++i) d.counts[kRealLineCounts[i]] = pt.counts[i];
  return d;
}

LineCountDistribution run_real_experiment(double lambda, long n, std::uint64_t seed, int workers) {
  validate(MeasureSpec{Measure::Real, 0, 0, lambda});
  return distribution_from_curve_point(estimate_curve({lambda}, static_cast<int>(n), seed, workers).front(), seed);
}

std::string distribution_csv(const LineCountDistribution& d) {
  std::string out = "count,probability\n";
  for (const auto& [count, n] : d.counts) out += std::to_string(count) + "," + fixed5(d.probability(count)) + "\n";
  return out;
}

std::string distribution_metadata_json(const LineCountDistribution& d) {
  const bool real = d.spec.kind == Measure::Real;
  json j;
  j["measure"] = measure_name(d.spec.kind);
  j["p"] = real ? json(nullptr) : json(d.spec.p);
  j["N"] = real ? json(nullptr) : json(d.spec.precision);
  j["lambda"] = real ? number5(d.spec.lambda) : json(nullptr);
  j["samples"] = d.samples;
  j["seed"] = d.seed;
  j["failures"] = d.failures;
  j["mean"] = number5(d.mean());
  if (!d.failure_kinds.empty()) j["failure_kinds"] = d.failure_kinds;
  if (d.spec.kind == Measure::Blowup) j["resamples"] = d.resamples;
  return j.dump(2) + "\n";
}

std::string curve_csv(const std::vector<SimplexCurvePoint>& curve) {
  std::string out = "lambda,pi3,pi7,pi15,pi27,n_samples,n_failures\n";
  for (const auto& pt : curve) {
    out += fixed5(pt.lambda);
    for (double p : pt.probabilities) out += "," + fixed5(p);
    out += "," + std::to_string(pt.n_samples) + "," + std::to_string(pt.n_failures) + "\n";
  }
  return out;
}

std::vector<SimplexCurvePoint> parse_curve_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("lambda,pi3,pi7,pi15,pi27", 0) != 0)
    throw std::invalid_argument("curve CSV: unexpected header");
  std::vector<SimplexCurvePoint> curve;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw std::invalid_argument("curve CSV: expected 7 columns");
    SimplexCurvePoint pt;
    try {
      pt.lambda = std::stod(cells[0]);
      for (int i = 0; i < 4; ++i) pt.probabilities[i] = std::stod(cells[i + 1]);
      pt.n_samples = std::stoi(cells[5]);
      pt.n_failures = std::stoi(cells[6]);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("curve CSV: malformed number in '" + line + "'");
    }
    curve.push_back(pt);
  }
  return curve;
}

std::string curve_metadata_json(const std::vector<SimplexCurvePoint>& curve, long samples, std::uint64_t seed) {
  json j;
  j["measure"] = "real";
  j["p"] = nullptr;
  j["N"] = nullptr;
  json lambdas = json::array(), means = json::array();
  long failures = 0;
  for (const auto& pt : curve) {
    lambdas.push_back(number5(pt.lambda));
    means.push_back(number5(pt.mean()));
    failures += pt.n_failures;
  }
  j["lambda"] = lambdas;
  j["samples"] = samples;
  j["seed"] = seed;
  j["failures"] = failures;
  j["mean"] = means;
  return j.dump(2) + "\n";
}

std::string curve_svg(const std::vector<SimplexCurvePoint>& curve) {
  // Vertices of a regular tetrahedron, viewed along a fixed oblique direction.
  const double vx[4][3] = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  const double yaw = 0.6, pitch = 0.35;
  auto project = [&](const std::array<double, 4>& pi) {
    double p[3] = {0, 0, 0};
    for (int v = 0; v < 4; ++v)
      for (int k = 0; k < 3; ++k) p[k] += pi[v] * vx[v][k];
    const double x = std::cos(yaw) * p[0] - std::sin(yaw) * p[1];
    const double y0 = std::sin(yaw) * p[0] + std::cos(yaw) * p[1];
    const double y = std::cos(pitch) * p[2] - std::sin(pitch) * y0;
    return std::pair{200 + 120 * x, 200 - 120 * y};
  };
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" viewBox=\"0 0 400 400\">\n";
  svg << "<rect width=\"400\" height=\"400\" fill=\"white\"/>\n";
  const char* labels[4] = {"3", "7", "15", "27"};
  std::array<std::pair<double, double>, 4> corners;
  for (int v = 0; v < 4; ++v) {
    std::array<double, 4> e{};
    e[v] = 1;
    corners[v] = project(e);
  }
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      svg << "<line x1=\"" << corners[a].first << "\" y1=\"" << corners[a].second << "\" x2=\"" << corners[b].first
          << "\" y2=\"" << corners[b].second << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
  for (int v = 0; v < 4; ++v)
    svg << "<text x=\"" << corners[v].first + 4 << "\" y=\"" << corners[v].second - 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << labels[v] << "</text>\n";
  if (!curve.empty()) {
    svg << "<polyline fill=\"none\" stroke=\"#c03\" stroke-width=\"2\" points=\"";
    for (const auto& pt : curve) {
      const auto [x, y] = project(pt.probabilities);
      svg << x << "," << y << " ";
    }
    svg << "\"/>\n";
    for (const auto& pt : curve) {
      const auto [x, y] = project(pt.probabilities);
      svg << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"2.5\" fill=\"#c03\"><title>lambda=" << fixed5(pt.lambda)
          << "</title></circle>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

CubicSurface parse_surface_json(const std::string& text, std::optional<long> p_override) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("surface JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array() || j["coeffs"].size() != kCubicMonomialCount)
    throw std::invalid_argument("surface JSON: expected \"coeffs\" with 20 entries");
  long p = 0;
  if (j.contains("p")) {
    if (!j["p"].is_number_integer()) throw std::invalid_argument("surface JSON: \"p\" must be an integer");
    p = j["p"].get<long>();
    if (p_override && *p_override != p) throw std::invalid_argument("surface JSON: p does not match --p");
  } else if (p_override) {
    p = *p_override;
  } else {
    throw std::invalid_argument("surface JSON: missing \"p\"");
  }
  const int precision = j.value("precision", 0);
  CubicCoeffs coeffs;
  for (int m = 0; m < kCubicMonomialCount; ++m) {
    const auto& c = j["coeffs"][m];
    if (c.is_number_integer()) {
      coeffs[m] = mpz_class(std::to_string(c.get<long long>()));
    } else if (c.is_string()) {
      if (coeffs[m].set_str(c.get<std::string>(), 10) != 0) throw std::invalid_argument("surface JSON: bad coefficient");
    } else {
      throw std::invalid_argument("surface JSON: coefficients must be integers");
    }
  }
  return make_surface(p, precision, coeffs);
}

std::string surface_json(const CubicSurface& s) {
  json j;
  j["p"] = s.p;
  j["precision"] = s.precision;
  json coeffs = json::array();
  for (const auto& c : s.coeffs) {
    if (c.fits_slong_p())
      coeffs.push_back(c.get_si());
    else
      coeffs.push_back(c.get_str());
  }
  j["coeffs"] = coeffs;
  return j.dump() + "\n";
}

std::vector<double> parse_lambda_grid(const std::string& text) {
  double a = 0, b = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof())
    throw std::invalid_argument("lambda grid must look like a:b:step");
  if (!(step > 0) || b < a) throw std::invalid_argument("lambda grid: need a <= b and step > 0");
  std::vector<double> out;
  for (long i = 0;; ++i) {
    const double l = a + i * step;
    if (l > b + 1e-9 * step) break;
    out.push_back(std::round(l * 1e9) / 1e9);
  }
  return out;
}

}  // namespace cubiclines
