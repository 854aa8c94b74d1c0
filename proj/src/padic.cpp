#include "cubiclines/padic.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "cubiclines/errors.hpp"

namespace cubiclines {

bool is_odd_prime(long p) {
  if (p < 3 || p % 2 == 0) return false;
  for (long q = 3; q * q <= p; q += 2)
    if (p % q == 0) return false;
  return true;
}

void require_odd_prime(long p) {
  if (!is_odd_prime(p))
    throw std::invalid_argument("p must be an odd prime, got " + std::to_string(p));
}

const mpz_class& prime_power(long p, int n) {
  thread_local std::unordered_map<long, std::deque<mpz_class>> cache;
  if (n < 0) throw std::invalid_argument("prime_power: negative exponent");
  auto& powers = cache[p];
  if (powers.empty()) powers.emplace_back(1);
  while (static_cast<int>(powers.size()) <= n) powers.push_back(powers.back() * p);
  return powers[static_cast<std::size_t>(n)];
}

int valuation(const mpz_class& n, long p) {
  if (n == 0) return kInfiniteValuation;
  mpz_class rest;
  mpz_class prime(p);
  return static_cast<int>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t()));
}

namespace {

mpz_class mod_pow(const mpz_class& x, long p, int n) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), prime_power(p, n).get_mpz_t());
  return r;
}

int add_sat(int a, int b) {
  if (a == kInfiniteValuation || b == kInfiniteValuation) return kInfiniteValuation;
  return a + b;
}

void require_same_prime(const PadicScalar& x, const PadicScalar& y) {
  if (x.prime() != y.prime()) throw std::invalid_argument("p-adic operands over different primes");
}

}  // namespace

PadicScalar PadicScalar::zero(long p, int absolute) {
  return PadicScalar(p, kInfiniteValuation, mpz_class(0), 0, absolute);
}

PadicScalar PadicScalar::make(const mpz_class& n, long p, int precision) {
  require_odd_prime(p);
  if (precision < 1) throw std::invalid_argument("precision must be at least 1");
  if (n == 0) return zero(p);
  mpz_class rest;
  mpz_class prime(p);
  const int v = static_cast<int>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t()));
  return PadicScalar(p, v, mod_pow(rest, p, precision), precision, kInfiniteValuation);
}

PadicScalar PadicScalar::with_absolute_precision(const mpz_class& n, long p, int absolute) {
  require_odd_prime(p);
  return normalized(p, n, 0, absolute);
}

PadicScalar PadicScalar::normalized(long p, mpz_class value, int base_valuation, int absolute) {
  const int width = absolute - base_valuation;
  if (width < 1) return zero(p, absolute);
  value = mod_pow(value, p, width);
  if (value == 0) return zero(p, absolute);
  mpz_class rest;
  mpz_class prime(p);
  const int t = static_cast<int>(mpz_remove(rest.get_mpz_t(), value.get_mpz_t(), prime.get_mpz_t()));
  const int v = base_valuation + t;
  return PadicScalar(p, v, std::move(rest), absolute - v, kInfiniteValuation);
}

const mpz_class& PadicScalar::unit() const {
  if (is_zero()) throw PrecisionExhausted("zero has no unit part");
  return u_;
}

mpz_class PadicScalar::to_integer() const {
  if (is_zero()) return 0;
  if (v_ < 0) throw std::domain_error("p-adic scalar is not integral");
  return u_ * prime_power(p_, v_);
}

PadicScalar PadicScalar::shifted(int k) const {
  if (is_zero()) return zero(p_, abs_ == kInfiniteValuation ? abs_ : abs_ + k);
  return PadicScalar(p_, v_ + k, u_, n_, kInfiniteValuation);
}

PadicScalar PadicScalar::truncated(int precision) const {
  if (precision < 1) throw std::invalid_argument("precision must be at least 1");
  if (is_zero() || precision >= n_) return *this;
  return PadicScalar(p_, v_, mod_pow(u_, p_, precision), precision, kInfiniteValuation);
}

PadicScalar PadicScalar::operator-() const {
  if (is_zero()) return *this;
  return PadicScalar(p_, v_, prime_power(p_, n_) - u_, n_, kInfiniteValuation);
}

PadicScalar operator+(const PadicScalar& x, const PadicScalar& y) {
  require_same_prime(x, y);
  const long p = x.p_;
  if (x.is_zero() || y.is_zero()) {
    const int absolute = std::min(x.absolute_precision(), y.absolute_precision());
    if (x.is_zero() && y.is_zero()) return PadicScalar::zero(p, absolute);
    const PadicScalar& z = x.is_zero() ? y : x;
    if (absolute == z.absolute_precision()) return z;
    if (z.v_ >= absolute) return PadicScalar::zero(p, absolute);
    return z.truncated(absolute - z.v_);
  }
  const int absolute = std::min(x.absolute_precision(), y.absolute_precision());
  const int v0 = std::min(x.v_, y.v_);
  mpz_class s = x.u_ * prime_power(p, x.v_ - v0) + y.u_ * prime_power(p, y.v_ - v0);
  return PadicScalar::normalized(p, std::move(s), v0, absolute);
}

PadicScalar operator-(const PadicScalar& x, const PadicScalar& y) { return x + (-y); }

PadicScalar operator*(const PadicScalar& x, const PadicScalar& y) {
  require_same_prime(x, y);
  const long p = x.p_;
  if (x.is_exact_zero() || y.is_exact_zero()) return PadicScalar::zero(p);
  if (x.is_zero() || y.is_zero()) {
    const int ax = x.is_zero() ? x.abs_ : x.v_;
    const int ay = y.is_zero() ? y.abs_ : y.v_;
    return PadicScalar::zero(p, add_sat(ax, ay));
  }
  const int n = std::min(x.n_, y.n_);
  return PadicScalar(p, x.v_ + y.v_, mod_pow(x.u_ * y.u_, p, n), n, kInfiniteValuation);
}

PadicScalar operator/(const PadicScalar& x, const PadicScalar& y) {
  require_same_prime(x, y);
  const long p = x.p_;
  if (y.is_exact_zero()) throw DivisionByZero("p-adic division by zero");
  if (y.is_zero()) throw PrecisionExhausted("p-adic division by a value indistinguishable from zero");
  if (x.is_zero()) return x.shifted(-y.v_);
  const int n = std::min(x.n_, y.n_);
  const mpz_class& modulus = prime_power(p, n);
  mpz_class inv;
  mpz_class uy = mod_pow(y.u_, p, n);
  mpz_invert(inv.get_mpz_t(), uy.get_mpz_t(), modulus.get_mpz_t());
  return PadicScalar(p, x.v_ - y.v_, mod_pow(x.u_ * inv, p, n), n, kInfiniteValuation);
}

bool operator==(const PadicScalar& x, const PadicScalar& y) {
  if (x.prime() != y.prime()) return false;
  return (x - y).is_zero();
}

std::ostream& operator<<(std::ostream& os, const PadicScalar& x) {
  if (x.is_zero()) {
    os << "0";
    if (!x.is_exact_zero()) os << " + O(" << x.prime() << "^" << x.absolute_precision() << ")";
    return os;
  }
  return os << x.unit() << "*" << x.prime() << "^" << x.valuation() << " + O(" << x.prime() << "^"
            << x.absolute_precision() << ")";
}

int legendre(const mpz_class& a, long p) {
  mpz_class prime(p);
  return mpz_legendre(a.get_mpz_t(), prime.get_mpz_t());
}

bool is_square(const PadicScalar& x) {
  if (x.is_exact_zero()) throw std::invalid_argument("is_square: zero argument");
  if (x.valuation() % 2 != 0) return false;
  return legendre(x.unit(), x.prime()) == 1;
}

long smallest_nonresidue(long p) {
  require_odd_prime(p);
  for (long n = 2;; ++n)
    if (legendre(mpz_class(n), p) == -1) return n;
}

ExtensionDescriptor make_extension(long p, ExtensionKind kind) {
  require_odd_prime(p);
  const long u = smallest_nonresidue(p);
  switch (kind) {
    case ExtensionKind::unramified: return {kind, p, u, 1, p * p};
    case ExtensionKind::ramified_p: return {kind, p, p, 2, p};
    case ExtensionKind::ramified_up: return {kind, p, u * p, 2, p};
  }
  throw std::invalid_argument("unknown extension kind");
}

std::array<ExtensionDescriptor, 3> quadratic_extensions(long p) {
  return {make_extension(p, ExtensionKind::unramified), make_extension(p, ExtensionKind::ramified_p),
          make_extension(p, ExtensionKind::ramified_up)};
}

// ---------------------------------------------------------------------------

namespace {

PadicScalar times_unit(const PadicScalar& x, long w) {
  if (x.is_zero() || w == 1) return x;
  return PadicScalar::make(w, x.prime(), x.precision()) * x;
}

PadicScalar over_unit(const PadicScalar& x, long w) {
  if (x.is_zero() || w == 1) return x;
  return x / PadicScalar::make(w, x.prime(), x.precision());
}

// d * x for the radicand d = w * p^(e-1).
PadicScalar times_radicand(const ExtensionDescriptor& ext, const PadicScalar& x) {
  return times_unit(x.shifted(ext.ramification - 1), ext.radicand_unit());
}

void require_same_extension(const QuadExtScalar& x, const QuadExtScalar& y) {
  if (!(x.extension() == y.extension())) throw DescriptorMismatch("quadratic extension mismatch");
}

int scaled_bound(int absolute, int e, int offset) {
  if (absolute == kInfiniteValuation) return kInfiniteValuation;
  return e * absolute + offset;
}

}  // namespace

QuadExtScalar::QuadExtScalar(const ExtensionDescriptor& ext, PadicScalar a, PadicScalar b)
    : ext_(ext), a_(std::move(a)), b_(std::move(b)) {
  if (a_.prime() != ext.p || b_.prime() != ext.p)
    throw std::invalid_argument("component prime does not match extension");
}

QuadExtScalar QuadExtScalar::from_base(const ExtensionDescriptor& ext, PadicScalar a) {
  return QuadExtScalar(ext, std::move(a), PadicScalar::zero(ext.p));
}

QuadExtScalar QuadExtScalar::sqrt_radicand(const ExtensionDescriptor& ext, int precision) {
  return QuadExtScalar(ext, PadicScalar::zero(ext.p), PadicScalar::make(1, ext.p, precision));
}

QuadExtScalar QuadExtScalar::uniformizer(const ExtensionDescriptor& ext, int precision) {
  if (ext.ramification == 1) return from_base(ext, PadicScalar::make(ext.p, ext.p, precision));
  return sqrt_radicand(ext, precision);
}

int QuadExtScalar::valuation_units() const {
  const int e = ext_.ramification;
  const int offset = e - 1;  // v(sqrt d) = (e-1)/e
  int known = kInfiniteValuation;
  int bound = kInfiniteValuation;
  if (a_.is_zero())
    bound = std::min(bound, scaled_bound(a_.absolute_precision(), e, 0));
  else
    known = std::min(known, e * a_.valuation());
  if (b_.is_zero())
    bound = std::min(bound, scaled_bound(b_.absolute_precision(), e, offset));
  else
    known = std::min(known, e * b_.valuation() + offset);
  if (known < bound) return known;
  if (known == kInfiniteValuation && bound == kInfiniteValuation) return kInfiniteValuation;
  throw PrecisionExhausted("valuation undetermined at available precision");
}

int QuadExtScalar::absolute_precision_units() const {
  const int e = ext_.ramification;
  return std::min(scaled_bound(a_.absolute_precision(), e, 0),
                  scaled_bound(b_.absolute_precision(), e, e - 1));
}

QuadExtScalar QuadExtScalar::conjugate() const { return QuadExtScalar(ext_, a_, -b_); }

PadicScalar QuadExtScalar::norm() const { return a_ * a_ - times_radicand(ext_, b_ * b_); }

QuadExtScalar QuadExtScalar::inverse() const {
  const PadicScalar n = norm();
  return QuadExtScalar(ext_, a_ / n, -(b_ / n));
}

QuadExtScalar QuadExtScalar::divided_by_uniformizer(int m) const {
  if (m < 0) throw std::invalid_argument("divided_by_uniformizer: negative power");
  if (ext_.ramification == 1) return QuadExtScalar(ext_, a_.shifted(-m), b_.shifted(-m));
  const long w = ext_.radicand_unit();
  PadicScalar a = a_;
  PadicScalar b = b_;
  for (; m >= 2; m -= 2) {
    a = over_unit(a.shifted(-1), w);
    b = over_unit(b.shifted(-1), w);
  }
  if (m == 1) {
    // (a + b sqrt d) / sqrt d = b + (a / d) sqrt d
    PadicScalar next_b = over_unit(a.shifted(-1), w);
    a = std::move(b);
    b = std::move(next_b);
  }
  return QuadExtScalar(ext_, std::move(a), std::move(b));
}

std::pair<long, long> QuadExtScalar::residue() const {
  if (valuation_units() != 0) throw std::domain_error("residue of a non-unit");
  const long p = ext_.p;
  auto digit = [p](const PadicScalar& x) -> long {
    if (x.is_zero() || x.valuation() > 0) return 0;
    return mpz_class(x.unit() % p).get_si();
  };
  if (ext_.ramification == 2) return {digit(a_), 0};
  return {digit(a_), digit(b_)};
}

QuadExtScalar QuadExtScalar::operator-() const { return QuadExtScalar(ext_, -a_, -b_); }

QuadExtScalar operator+(const QuadExtScalar& x, const QuadExtScalar& y) {
  require_same_extension(x, y);
  return QuadExtScalar(x.ext_, x.a_ + y.a_, x.b_ + y.b_);
}

QuadExtScalar operator-(const QuadExtScalar& x, const QuadExtScalar& y) {
  require_same_extension(x, y);
  return QuadExtScalar(x.ext_, x.a_ - y.a_, x.b_ - y.b_);
}

QuadExtScalar operator*(const QuadExtScalar& x, const QuadExtScalar& y) {
  require_same_extension(x, y);
  const auto& ext = x.ext_;
  PadicScalar a = x.a_ * y.a_;
  if (!x.b_.is_exact_zero() && !y.b_.is_exact_zero()) a = a + times_radicand(ext, x.b_ * y.b_);
  PadicScalar b = x.a_ * y.b_ + x.b_ * y.a_;
  return QuadExtScalar(ext, std::move(a), std::move(b));
}

QuadExtScalar operator/(const QuadExtScalar& x, const QuadExtScalar& y) {
  require_same_extension(x, y);
  return x * y.inverse();
}

bool operator==(const QuadExtScalar& x, const QuadExtScalar& y) {
  if (!(x.ext_ == y.ext_)) return false;
  return (x - y).is_zero();
}

}  // namespace cubiclines
