#pragma once

#include <iosfwd>
#include <string>

#include "picard/rational.hpp"

namespace picard {

/// Closed interval with exact rational endpoints, lo <= hi.
struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  Interval(Rational point);  // NOLINT(google-explicit-constructor)
  Interval(Rational lower, Rational upper);

  Rational width() const { return hi - lo; }
  Rational magnitude() const;  // max |v| over the interval
  Rational mignitude() const;  // min |v| over the interval
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  bool contains(double v) const;
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
  bool contains_zero() const { return lo <= 0 && 0 <= hi; }

  friend bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
/// Throws DomainError when b contains zero.
Interval operator/(const Interval& a, const Interval& b);

Interval hull(const Interval& a, const Interval& b);
/// Throws std::invalid_argument when the intervals are disjoint.
Interval intersect(const Interval& a, const Interval& b);

/// Integer power with the dedicated even-power rule ([-1,2]^2 = [0,4]).
Interval pow(const Interval& base, int exponent);

/// Relative widening applied to every float-valued endpoint.
inline constexpr double kDefaultOutwardMargin = 0x1p-40;

/// Enclosures of elementary functions. Endpoints come from double evaluation
/// and are rounded outward by `margin` (relative) plus a tiny absolute floor.
Interval exp(const Interval& x, double margin = kDefaultOutwardMargin);
Interval log(const Interval& x, double margin = kDefaultOutwardMargin);
Interval sin(const Interval& x, double margin = kDefaultOutwardMargin);
Interval cos(const Interval& x, double margin = kDefaultOutwardMargin);
Interval tan(const Interval& x, double margin = kDefaultOutwardMargin);
Interval tanh(const Interval& x, double margin = kDefaultOutwardMargin);
Interval sech(const Interval& x, double margin = kDefaultOutwardMargin);
Interval sqrt(const Interval& x, double margin = kDefaultOutwardMargin);
/// x^(p/q) for a non-integer rational exponent; requires x >= 0 (x > 0 if negative).
Interval rational_pow(const Interval& x, const Rational& exponent, double margin = kDefaultOutwardMargin);
/// Enclosure of a float approximation of a real constant.
Interval enclose(double value, double margin = kDefaultOutwardMargin);

std::string to_string(const Interval& x);
std::ostream& operator<<(std::ostream& os, const Interval& x);

}  // namespace picard
