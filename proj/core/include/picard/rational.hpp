#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace picard {

/// Exact arbitrary-precision rational, always kept in lowest terms.
using Rational = mpq_class;

Rational make_rational(long numerator, long denominator = 1);

/// Parses "7", "-3/4" or "0.125" into an exact rational.
/// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Exact binary value of a finite double.
Rational from_double(double value);

Rational pow(const Rational& base, int exponent);
Rational abs(const Rational& value);
Rational factorial(unsigned n);

/// Exact n-th root when it exists in the rationals.
bool exact_root(const Rational& value, unsigned n, Rational& root);

/// Largest multiple of 2^-40 whose n-th power does not exceed value (value >= 0).
/// Returns the exact root instead when one exists.
Rational root_lower_bound(const Rational& value, unsigned n);

/// Bits in max(|numerator|, denominator).
std::size_t bit_size(const Rational& value);

}  // namespace picard
