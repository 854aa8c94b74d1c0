#include "cubiclines/padic_poly.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include "cubiclines/errors.hpp"

namespace cubiclines {

PadicPolynomial::PadicPolynomial(long p, IntPoly coefficients) : p_(p), coeffs_(std::move(coefficients)) {
  require_odd_prime(p);
  trim(coeffs_);
  if (coeffs_.empty()) throw std::invalid_argument("PadicPolynomial: zero polynomial");
}

NewtonPolygon newton_polygon(const PadicPolynomial& f) {
  struct Point {
    long x;
    long y;
  };
  std::vector<Point> pts;
  for (int i = 0; i <= f.degree(); ++i)
    if (f.coefficient(i) != 0) pts.push_back({i, valuation(f.coefficient(i), f.prime())});

  // Lower hull, points already sorted by x.
  std::vector<Point> hull;
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      const Point& a = hull[hull.size() - 2];
      const Point& b = hull.back();
      // drop b unless it lies strictly below segment a -> pt
      if ((b.y - a.y) * (pt.x - a.x) >= (pt.y - a.y) * (b.x - a.x))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(pt);
  }

  NewtonPolygon poly;
  for (std::size_t i = 1; i < hull.size(); ++i) {
    long num = hull[i].y - hull[i - 1].y;
    long den = hull[i].x - hull[i - 1].x;
    const long g = std::gcd(num, den);
    poly.segments.push_back({num / g, den / g, static_cast<int>(den)});
  }
  return poly;
}

mpz_class discriminant(const PadicPolynomial& f) {
  if (f.degree() < 2) throw std::invalid_argument("discriminant: degree must be at least 2");
  return discriminant(f.coefficients());
}

namespace {

constexpr int kGuardDigits = 10;

// Elements of the residue field: x + y*s with s^2 = u_ns (y = 0 outside
// the unramified extension).
struct Residue {
  long x = 0;
  long y = 0;
  bool is_zero() const { return x == 0 && y == 0; }
};

struct ResidueField {
  long p;
  long u;  // s^2
  bool two_dimensional;

  Residue add(Residue a, Residue b) const { return {(a.x + b.x) % p, (a.y + b.y) % p}; }
  Residue mul(Residue a, Residue b) const {
    return {(a.x * b.x + u * ((a.y * b.y) % p)) % p, (a.x * b.y + a.y * b.x) % p};
  }
  Residue scale(Residue a, long k) const { return {(a.x * k) % p, (a.y * k) % p}; }
};

/**
 * Counts roots in the ring of integers of K by descending residue classes.
 *
 * For a class c + pi^k O the polynomial G(c + pi^k y) is normalized by its
 * content and reduced modulo pi; a simple root of the reduction is a root
 * by Hensel's lemma, a multiple root is refined one digit further.
 */
class RootCounter {
 public:
  RootCounter(const ExtensionDescriptor& ext, bool base_field, int depth_bound)
      : ext_(ext),
        field_{ext.p, ext.radicand_unit(), ext.ramification == 1 && !base_field},
        depth_bound_(depth_bound) {}

  long count(const PadicPolynomial& f) {
    const long p = f.prime();
    const int e = ext_.ramification;
    const int d = f.degree();
    long total = 0;
    for (const auto& seg : newton_polygon(f).segments) {
      // root valuation -num/den must lie in (1/e)Z
      if ((seg.numerator * e) % seg.denominator != 0) continue;
      const long r = -seg.numerator * e / seg.denominator;

      const int lc_units = e * valuation(f.coefficient(d), p) + static_cast<int>(r > 0 ? r * d : 0);
      precision_ = (lc_units + depth_bound_ * d + e - 1) / e + kGuardDigits;
      pi_ = QuadExtScalar::uniformizer(ext_, precision_);
      pi_powers_.assign(1, base(1));

      std::vector<QuadExtScalar> g;
      g.reserve(static_cast<std::size_t>(d + 1));
      for (int i = 0; i <= d; ++i) {
        const long shift = r >= 0 ? r * i : -r * (d - i);
        g.push_back(base(f.coefficient(i)) * pi_power(static_cast<int>(shift)));
      }
      g_ = std::move(g);
      total += count_in_class(base(0), 0, true);
    }
    return total;
  }

 private:
  QuadExtScalar base(const mpz_class& n) const {
    return QuadExtScalar::from_base(ext_, PadicScalar::with_absolute_precision(n, ext_.p, precision_));
  }

  QuadExtScalar pi_power(int n) {
    while (static_cast<int>(pi_powers_.size()) <= n) pi_powers_.push_back(pi_powers_.back() * pi_);
    return pi_powers_[static_cast<std::size_t>(n)];
  }

  QuadExtScalar lift(Residue rho) const {
    auto digit = [this](long v) { return PadicScalar::with_absolute_precision(v, ext_.p, precision_); };
    if (!field_.two_dimensional) return QuadExtScalar::from_base(ext_, digit(rho.x));
    return QuadExtScalar(ext_, digit(rho.x), digit(rho.y));
  }

  long count_in_class(const QuadExtScalar& center, int level, bool units_only) {
    const int d = static_cast<int>(g_.size()) - 1;

    // Taylor coefficients of G at the center.
    std::vector<QuadExtScalar> t = g_;
    if (!center.is_zero())
      for (int i = 0; i < d; ++i)
        for (int j = d - 1; j >= i; --j) t[j] = t[j] + center * t[j + 1];

    int min_val = kInfiniteValuation;
    int bound = kInfiniteValuation;
    std::vector<int> vals(static_cast<std::size_t>(d + 1), kInfiniteValuation);
    for (int j = 0; j <= d; ++j) {
      if (level > 0) t[j] = t[j] * pi_power(level * j);
      if (t[j].is_zero()) {
        bound = std::min(bound, t[j].absolute_precision_units());
        continue;
      }
      try {
        vals[j] = t[j].valuation_units();
        min_val = std::min(min_val, vals[j]);
      } catch (const PrecisionExhausted&) {
        // only a lower bound is known for this term
        bound = std::min(bound, t[j].absolute_precision_units());
      }
    }
    if (min_val >= bound)
      throw PrecisionExhausted("root counting: working precision " + std::to_string(precision_) +
                               " too small at depth " + std::to_string(level));

    std::vector<Residue> h(static_cast<std::size_t>(d + 1));
    for (int j = 0; j <= d; ++j) {
      if (vals[j] != min_val) continue;
      const auto [x, y] = t[j].divided_by_uniformizer(min_val).residue();
      h[j] = {x, y};
    }

    long found = 0;
    const long p = field_.p;
    const long ys = field_.two_dimensional ? p : 1;
    for (long x = 0; x < p; ++x) {
      for (long y = 0; y < ys; ++y) {
        const Residue rho{x, y};
        if (units_only && rho.is_zero()) continue;
        Residue value;
        Residue slope;
        for (int j = d; j >= 0; --j) {
          value = field_.add(field_.mul(value, rho), h[j]);
          if (j > 0) slope = field_.add(field_.mul(slope, rho), field_.scale(h[j], j % p));
        }
        if (!value.is_zero()) continue;
        if (!slope.is_zero()) {
          ++found;  // simple root of the reduction: Hensel lifts it uniquely
          continue;
        }
        if (level + 1 > depth_bound_)
          throw DepthExceeded("root refinement exceeded depth bound " + std::to_string(depth_bound_));
        found += count_in_class(center + lift(rho) * pi_power(level), level + 1, false);
      }
    }
    return found;
  }

  ExtensionDescriptor ext_;
  ResidueField field_;
  int depth_bound_;
  int precision_ = kDefaultPrecision;
  QuadExtScalar pi_ = QuadExtScalar::from_base(ext_, PadicScalar::zero(ext_.p));
  std::vector<QuadExtScalar> pi_powers_;
  std::vector<QuadExtScalar> g_;
};

struct Prepared {
  std::optional<PadicPolynomial> rest;  // f with a root at 0 divided out
  long zero_roots = 0;
  int depth_bound = 1;
};

Prepared prepare(const PadicPolynomial& f) {
  Prepared out;
  IntPoly c = f.coefficients();
  if (c.size() > 1 && c.front() == 0) {
    c.erase(c.begin());
    out.zero_roots = 1;
  }
  if (c.size() > 2) {
    const mpz_class disc = discriminant(c);
    if (disc == 0) throw NotSquarefree("count_roots: polynomial is not squarefree");
    out.depth_bound = 2 * valuation(disc, f.prime()) + 1;
  }
  if (c.size() > 1) {
    if (out.zero_roots && c.front() == 0) throw NotSquarefree("count_roots: repeated root at 0");
    out.rest.emplace(f.prime(), std::move(c));
  }
  return out;
}

long count_prepared(const Prepared& prep, const ExtensionDescriptor& ext, bool base_field) {
  if (!prep.rest) return prep.zero_roots;
  if (prep.rest->degree() == 1) return prep.zero_roots + 1;
  RootCounter counter(ext, base_field, prep.depth_bound);
  return prep.zero_roots + counter.count(*prep.rest);
}

}  // namespace

long count_roots(const PadicPolynomial& f) {
  const Prepared prep = prepare(f);
  return count_prepared(prep, make_extension(f.prime(), ExtensionKind::unramified), true);
}

long count_roots(const PadicPolynomial& f, const ExtensionDescriptor& ext) {
  if (ext.p != f.prime()) throw DescriptorMismatch("extension prime differs from polynomial prime");
  const Prepared prep = prepare(f);
  return count_prepared(prep, ext, false);
}

FactorPattern factor_pattern(const PadicPolynomial& f) {
  const Prepared prep = prepare(f);
  const long p = f.prime();
  FactorPattern pattern;
  pattern.linear = static_cast<int>(count_prepared(prep, make_extension(p, ExtensionKind::unramified), true));
  for (const auto& ext : quadratic_extensions(p)) {
    const long extra = count_prepared(prep, ext, false) - pattern.linear;
    if (extra < 0 || extra % 2 != 0)
      throw InternalInconsistency("root count over a quadratic extension has the wrong parity");
    pattern.quadratic += static_cast<int>(extra / 2);
  }
  if (pattern.linear + 2 * pattern.quadratic > f.degree())
    throw InternalInconsistency("factor pattern exceeds the degree");
  return pattern;
}

int line_count_from_pattern(const FactorPattern& pattern) {
  const int l = pattern.linear;
  const int q = pattern.quadratic;
  if (l < 0 || q < 0 || l + 2 * q > 6) throw std::invalid_argument("not a sextic factor pattern");
  return 2 * l + q + l * (l - 1) / 2;
}

}  // namespace cubiclines
