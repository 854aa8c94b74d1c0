#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"

#include "cubiclines/blowup.hpp"
#include "cubiclines/errors.hpp"
#include "cubiclines/experiments.hpp"
#include "cubiclines/fano_padic.hpp"

using namespace cubiclines;

namespace {

enum Exit { kOk = 0, kInvalid = 2, kVerification = 3, kSolver = 4 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out || !(out << text)) throw IoError("cannot write " + path);
}

void emit(const std::string& out, const std::string& csv, const std::string& meta) {
  if (out.empty()) {
    std::cout << csv << meta;
    return;
  }
  write_file(out, csv);
  write_file(out + ".json", meta);
}

int default_workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::string pattern_string(const FactorPattern& f) {
  return "(" + std::to_string(f.linear) + "," + std::to_string(f.quadratic) + ")";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lines on random cubic surfaces over p-adic and real fields"};
  app.require_subcommand(1);

  long p = kDefaultPrime;
  long samples = kDefaultSamples;
  std::uint64_t seed = 1;
  int workers = default_workers();
  std::string out, measure = "haar", in, surface_path, svg_out, grid;
  int precision = -1;
  double lambda = kKostlanLambda;

  auto* verify = app.add_subcommand("verify-theorem1", "Check the nine sextics realizing each line count");
  verify->add_option("--p", p, "odd prime")->capture_default_str();

  auto* padic = app.add_subcommand("padic", "Monte Carlo line counts under a p-adic measure");
  padic->add_option("--measure", measure, "haar | blowup | tropical | tropical-generic")
      ->check(CLI::IsMember({"haar", "blowup", "tropical", "tropical-generic"}))
      ->capture_default_str();
  padic->add_option("--p", p, "odd prime")->capture_default_str();
  padic->add_option("--precision", precision, "sampling precision N (default 20, tropical 5)");
  padic->add_option("--samples", samples, "number of samples")->capture_default_str();
  padic->add_option("--seed", seed, "base seed")->capture_default_str();
  padic->add_option("--workers", workers, "worker threads");
  padic->add_option("--out", out, "distribution CSV; metadata goes to OUT.json");

  auto* real = app.add_subcommand("real", "Real line counts under P_lambda");
  auto* lambda_opt = real->add_option("--lambda", lambda, "single lambda in (0, 1)");
  auto* grid_opt = real->add_option("--lambda-grid", grid, "a:b:step");
  lambda_opt->excludes(grid_opt);
  real->add_option("--samples", samples, "samples per lambda")->capture_default_str();
  real->add_option("--seed", seed, "base seed")->capture_default_str();
  real->add_option("--workers", workers, "worker threads");
  real->add_option("--out", out, "CSV output; metadata goes to OUT.json");
  real->add_option("--svg", svg_out, "SVG of the simplex curve (grid runs)");

  auto* plot = app.add_subcommand("plot-curve", "Draw a simplex curve CSV as SVG");
  plot->add_option("--in", in, "curve CSV")->required();
  plot->add_option("--out", out, "SVG output")->required();

  auto* count = app.add_subcommand("count", "Count Q_p-lines on one surface");
  count->add_option("--surface", surface_path, "surface JSON")->required();
  auto* p_opt = count->add_option("--p", p, "odd prime (must match the file when both are given)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*verify) {
      const auto report = verify_theorem1(p);
      std::printf("%-42s %-8s %-8s %-6s %-6s %s\n", "polynomial", "expect", "found", "lines", "ok", "note");
      for (const auto& row : report.rows)
        std::printf("%-42s %-8s %-8s %-6d %-6s %s\n", row.label.c_str(), pattern_string(row.expected_pattern).c_str(),
                    pattern_string(row.pattern).c_str(), row.lines, row.pass ? "PASS" : "FAIL", row.error.c_str());
      std::printf("%d/%zu passed\n", report.passed(), report.rows.size());
      return report.all_pass() ? kOk : kVerification;
    }

    if (*padic) {
      MeasureSpec spec;
      spec.kind = parse_measure(measure);
      spec.p = p;
      const bool tropical = spec.kind == Measure::Tropical || spec.kind == Measure::TropicalGeneric;
      spec.precision = precision >= 0 ? precision : tropical ? kDefaultTropicalPrecision : kDefaultSamplingPrecision;
      const auto d = run_padic_experiment(spec, samples, seed, workers);
      emit(out, distribution_csv(d), distribution_metadata_json(d));
      if (!out.empty()) std::printf("mean %.5f, failures %ld of %ld\n", d.mean(), d.failures, d.samples);
      return kOk;
    }

    if (*real) {
      if (samples < 1 || samples > std::numeric_limits<int>::max()) throw std::invalid_argument("bad sample count");
      if (*grid_opt) {
        const auto lambdas = parse_lambda_grid(grid);
        const auto curve = estimate_curve(lambdas, static_cast<int>(samples), seed, workers);
        emit(out, curve_csv(curve), curve_metadata_json(curve, samples, seed));
        if (!svg_out.empty()) write_file(svg_out, curve_svg(curve));
        return kOk;
      }
      const auto d = run_real_experiment(lambda, samples, seed, workers);
      emit(out, distribution_csv(d), distribution_metadata_json(d));
      if (!out.empty()) std::printf("mean %.5f, failures %ld of %ld\n", d.mean(), d.failures, d.samples);
      return kOk;
    }

    if (*plot) {
      write_file(out, curve_svg(parse_curve_csv(read_file(in))));
      return kOk;
    }

    if (*count) {
      const auto surface =
          parse_surface_json(read_file(surface_path), *p_opt ? std::optional<long>(p) : std::nullopt);
      std::printf("%d\n", count_padic_lines(surface));
      return kOk;
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInvalid;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInvalid;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kSolver;
  }
  return kOk;
}
