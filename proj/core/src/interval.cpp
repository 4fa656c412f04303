#include "picard/interval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "picard/errors.hpp"

namespace picard {

Interval::Interval(Rational point) : lo(point), hi(std::move(point)) {}

Interval::Interval(Rational lower, Rational upper) : lo(std::move(lower)), hi(std::move(upper)) {
  if (lo > hi) throw std::invalid_argument("interval with lo > hi");
}

Rational Interval::magnitude() const {
  Rational a = abs(lo);
  Rational b = abs(hi);
  return a > b ? a : b;
}

Rational Interval::mignitude() const {
  if (contains_zero()) return Rational(0);
  return lo > 0 ? lo : Rational(-hi);
}

bool Interval::contains(double v) const {
  if (!std::isfinite(v)) return false;
  return contains(from_double(v));
}

Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
Interval operator-(const Interval& a, const Interval& b) { return {a.lo - b.hi, a.hi - b.lo}; }
Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  auto [mn, mx] = std::minmax_element(std::begin(p), std::end(p));
  return {*mn, *mx};
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw DomainError("division by an interval containing zero " + to_string(b));
  return a * Interval(1 / b.hi, 1 / b.lo);
}

Interval hull(const Interval& a, const Interval& b) {
  return {a.lo < b.lo ? a.lo : b.lo, a.hi > b.hi ? a.hi : b.hi};
}

Interval intersect(const Interval& a, const Interval& b) {
  Rational lo = a.lo > b.lo ? a.lo : b.lo;
  Rational hi = a.hi < b.hi ? a.hi : b.hi;
  if (lo > hi) throw std::invalid_argument("disjoint intervals");
  return {lo, hi};
}

Interval pow(const Interval& base, int exponent) {
  if (exponent == 0) return Interval(Rational(1));
  if (exponent < 0) {
    if (base.contains_zero())
      throw DomainError("negative power of an interval containing zero " + to_string(base));
    return Interval(Rational(1)) / pow(base, -exponent);
  }
  Rational a = picard::pow(base.lo, exponent);
  Rational b = picard::pow(base.hi, exponent);
  if (exponent % 2 == 1) return {a, b};
  if (base.lo >= 0) return {a, b};
  if (base.hi <= 0) return {b, a};
  return {Rational(0), a > b ? a : b};
}

namespace {

constexpr double kAbsoluteFloor = 0x1p-100;

Rational lower(double v, double margin) {
  if (!std::isfinite(v)) throw DomainError("non-finite value in interval evaluation");
  return from_double(v) - from_double(std::fabs(v) * margin + kAbsoluteFloor);
}

Rational upper(double v, double margin) {
  if (!std::isfinite(v)) throw DomainError("non-finite value in interval evaluation");
  return from_double(v) + from_double(std::fabs(v) * margin + kAbsoluteFloor);
}

Interval widen(double lo, double hi, double margin) { return {lower(lo, margin), upper(hi, margin)}; }

template <class F>
Interval monotone_increasing(const Interval& x, F f, double margin) {
  return widen(f(to_double(x.lo)), f(to_double(x.hi)), margin);
}

// True when some c + k*period (k integer) may lie in [lo, hi], with slack.
bool hits_lattice(double lo, double hi, double c, double period) {
  constexpr double kSlack = 1e-9;
  double kmin = std::ceil((lo - c) / period - kSlack);
  double kmax = std::floor((hi - c) / period + kSlack);
  return kmin <= kmax;
}

Interval clamp_unit(Interval r) {
  if (r.lo < -1) r.lo = -1;
  if (r.hi > 1) r.hi = 1;
  return r;
}

}  // namespace

Interval enclose(double value, double margin) { return widen(value, value, margin); }

Interval exp(const Interval& x, double margin) {
  return monotone_increasing(x, [](double v) { return std::exp(v); }, margin);
}

Interval log(const Interval& x, double margin) {
  if (x.lo <= 0) throw DomainError("log of an interval reaching non-positive values " + to_string(x));
  if (x.lo == 1 && x.hi == 1) return Interval(Rational(0));
  return monotone_increasing(x, [](double v) { return std::log(v); }, margin);
}

Interval sqrt(const Interval& x, double margin) {
  if (x.lo < 0) throw DomainError("sqrt of an interval reaching negative values " + to_string(x));
  Rational rlo, rhi;
  if (exact_root(x.lo, 2, rlo) && exact_root(x.hi, 2, rhi)) return {rlo, rhi};
  Interval r = monotone_increasing(x, [](double v) { return std::sqrt(v); }, margin);
  if (r.lo < 0) r.lo = 0;
  return r;
}

Interval tanh(const Interval& x, double margin) {
  return clamp_unit(monotone_increasing(x, [](double v) { return std::tanh(v); }, margin));
}

Interval sech(const Interval& x, double margin) {
  double big = to_double(x.magnitude());
  double small = to_double(x.mignitude());
  Interval r = widen(1.0 / std::cosh(big), 1.0 / std::cosh(small), margin);
  if (r.lo < 0) r.lo = 0;
  if (r.hi > 1) r.hi = 1;
  return r;
}

Interval sin(const Interval& x, double margin) {
  constexpr double pi = std::numbers::pi;
  double lo = to_double(x.lo);
  double hi = to_double(x.hi);
  if (hi - lo >= 2 * pi) return {Rational(-1), Rational(1)};
  double a = std::sin(lo);
  double b = std::sin(hi);
  Interval r = widen(std::min(a, b), std::max(a, b), margin);
  if (hits_lattice(lo, hi, pi / 2, 2 * pi)) r.hi = 1;
  if (hits_lattice(lo, hi, -pi / 2, 2 * pi)) r.lo = -1;
  return clamp_unit(r);
}

Interval cos(const Interval& x, double margin) {
  constexpr double pi = std::numbers::pi;
  double lo = to_double(x.lo);
  double hi = to_double(x.hi);
  if (hi - lo >= 2 * pi) return {Rational(-1), Rational(1)};
  double a = std::cos(lo);
  double b = std::cos(hi);
  Interval r = widen(std::min(a, b), std::max(a, b), margin);
  if (hits_lattice(lo, hi, 0.0, 2 * pi)) r.hi = 1;
  if (hits_lattice(lo, hi, pi, 2 * pi)) r.lo = -1;
  return clamp_unit(r);
}

Interval tan(const Interval& x, double margin) {
  constexpr double pi = std::numbers::pi;
  double lo = to_double(x.lo);
  double hi = to_double(x.hi);
  if (hi - lo >= pi || hits_lattice(lo, hi, pi / 2, pi))
    throw DomainError("tan over an interval containing a pole " + to_string(x));
  return monotone_increasing(x, [](double v) { return std::tan(v); }, margin);
}

Interval rational_pow(const Interval& x, const Rational& exponent, double margin) {
  if (exponent.get_den() == 1) return pow(x, static_cast<int>(exponent.get_num().get_si()));
  if (x.lo < 0 || (exponent < 0 && x.lo == 0))
    throw DomainError("fractional power of an interval outside its domain " + to_string(x));
  double e = to_double(exponent);
  auto f = [e](double v) { return std::pow(v, e); };
  Interval r = exponent > 0 ? monotone_increasing(x, f, margin)
                            : widen(f(to_double(x.hi)), f(to_double(x.lo)), margin);
  if (r.lo < 0) r.lo = 0;
  return r;
}

std::string to_string(const Interval& x) { return "[" + to_string(x.lo) + ", " + to_string(x.hi) + "]"; }

std::ostream& operator<<(std::ostream& os, const Interval& x) { return os << to_string(x); }

}  // namespace picard
