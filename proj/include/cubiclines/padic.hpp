#pragma once

#include <array>
#include <limits>
#include <ostream>
#include <utility>

#include <gmpxx.h>

namespace cubiclines {

inline constexpr int kDefaultPrecision = 32;
inline constexpr int kInfiniteValuation = std::numeric_limits<int>::max();

bool is_odd_prime(long p);

// Throws std::invalid_argument unless p is an odd prime.
void require_odd_prime(long p);

// p^n, cached per thread.
const mpz_class& prime_power(long p, int n);

// p-adic valuation of a nonzero integer.
int valuation(const mpz_class& n, long p);

/**
 * An element of Q_p stored as unit * p^valuation, where the unit is known
 * modulo p^precision.
 *
 * Zero carries no unit. It remembers the absolute precision it is known to
 * (p^absolute divides the true value); an exact zero has infinite absolute
 * precision. Sums that cancel completely produce such an inexact zero.
 */
class PadicScalar {
 public:
  // n read to `precision` significant base-p digits.
  static PadicScalar make(const mpz_class& n, long p, int precision = kDefaultPrecision);
  // n known modulo p^absolute; becomes an inexact zero when p^absolute | n.
  static PadicScalar with_absolute_precision(const mpz_class& n, long p, int absolute);
  static PadicScalar zero(long p, int absolute = kInfiniteValuation);

  long prime() const { return p_; }
  bool is_zero() const { return v_ == kInfiniteValuation; }
  bool is_exact_zero() const { return is_zero() && abs_ == kInfiniteValuation; }
  int valuation() const { return v_; }
  // Throws PrecisionExhausted on zero.
  const mpz_class& unit() const;
  // Relative precision in base-p digits; 0 for zero.
  int precision() const { return is_zero() ? 0 : n_; }
  int absolute_precision() const { return is_zero() ? abs_ : v_ + n_; }

  // Integer representative u * p^v; requires v >= 0.
  mpz_class to_integer() const;
  // Multiply by p^k exactly.
  PadicScalar shifted(int k) const;
  // Drop digits down to the given relative precision.
  PadicScalar truncated(int precision) const;

  PadicScalar operator-() const;
  friend PadicScalar operator+(const PadicScalar& x, const PadicScalar& y);
  friend PadicScalar operator-(const PadicScalar& x, const PadicScalar& y);
  friend PadicScalar operator*(const PadicScalar& x, const PadicScalar& y);
  friend PadicScalar operator/(const PadicScalar& x, const PadicScalar& y);
  // Equal at the precision both sides are known to.
  friend bool operator==(const PadicScalar& x, const PadicScalar& y);

 private:
  PadicScalar(long p, int v, mpz_class u, int n, int abs)
      : p_(p), v_(v), u_(std::move(u)), n_(n), abs_(abs) {}
  static PadicScalar normalized(long p, mpz_class value, int base_valuation, int absolute);

  long p_ = 3;
  int v_ = kInfiniteValuation;
  mpz_class u_;
  int n_ = 0;
  int abs_ = kInfiniteValuation;  // only meaningful for zero
};

std::ostream& operator<<(std::ostream& os, const PadicScalar& x);

// Squares in Q_p for odd p: even valuation and a residue unit part.
bool is_square(const PadicScalar& x);

// Legendre symbol of an integer modulo the odd prime p (0, 1 or -1).
int legendre(const mpz_class& a, long p);

// Smallest positive quadratic non-residue modulo p.
long smallest_nonresidue(long p);

enum class ExtensionKind { unramified, ramified_p, ramified_up };

// One of the three quadratic extensions Q_p(sqrt(d)) for odd p.
struct ExtensionDescriptor {
  ExtensionKind kind = ExtensionKind::unramified;
  long p = 3;
  long radicand = 2;  // u_ns, p or u_ns * p
  int ramification = 1;
  long residue_field_size = 9;

  // radicand / p^(e-1): the unit part of the radicand.
  long radicand_unit() const { return ramification == 2 ? radicand / p : radicand; }
  friend bool operator==(const ExtensionDescriptor&, const ExtensionDescriptor&) = default;
};

ExtensionDescriptor make_extension(long p, ExtensionKind kind);
std::array<ExtensionDescriptor, 3> quadratic_extensions(long p);

/// a + b*sqrt(d) in a quadratic extension of Q_p.
///
/// Valuations are reported in units of 1/e, so they are always integers.
class QuadExtScalar {
 public:
  QuadExtScalar(const ExtensionDescriptor& ext, PadicScalar a, PadicScalar b);
  static QuadExtScalar from_base(const ExtensionDescriptor& ext, PadicScalar a);
  // sqrt(d) with components read to the given relative precision.
  static QuadExtScalar sqrt_radicand(const ExtensionDescriptor& ext, int precision = kDefaultPrecision);
  // The uniformizer: p when unramified, sqrt(d) when ramified.
  static QuadExtScalar uniformizer(const ExtensionDescriptor& ext, int precision = kDefaultPrecision);

  const ExtensionDescriptor& extension() const { return ext_; }
  const PadicScalar& rational_part() const { return a_; }
  const PadicScalar& radical_part() const { return b_; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  // e * valuation. Throws PrecisionExhausted when a partially known
  // component could still decide the minimum.
  int valuation_units() const;
  // Lower bound on e * valuation implied by the known digits.
  int absolute_precision_units() const;

  QuadExtScalar conjugate() const;
  PadicScalar norm() const;
  QuadExtScalar inverse() const;
  // Divide by uniformizer^m, m >= 0.
  QuadExtScalar divided_by_uniformizer(int m) const;
  // Residue class of a unit, as (x, y) meaning x + y*sqrt(u_ns) in F_{p^2}
  // (unramified) or (x, 0) in F_p (ramified).
  std::pair<long, long> residue() const;

  QuadExtScalar operator-() const;
  friend QuadExtScalar operator+(const QuadExtScalar& x, const QuadExtScalar& y);
  friend QuadExtScalar operator-(const QuadExtScalar& x, const QuadExtScalar& y);
  friend QuadExtScalar operator*(const QuadExtScalar& x, const QuadExtScalar& y);
  friend QuadExtScalar operator/(const QuadExtScalar& x, const QuadExtScalar& y);
  friend bool operator==(const QuadExtScalar& x, const QuadExtScalar& y);

 private:
  ExtensionDescriptor ext_;
  PadicScalar a_;
  PadicScalar b_;
};

}  // namespace cubiclines
