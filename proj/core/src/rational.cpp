#include "picard/rational.hpp"

#include <mpfr.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace picard {

Rational make_rational(long numerator, long denominator) {
  if (denominator == 0) throw std::invalid_argument("zero denominator");
  Rational r(numerator, denominator);
  r.canonicalize();
  return r;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational result;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    mpz_class d(std::string(den), 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    result = Rational(mpz_class(std::string(num), 10), d);
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty()))
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    mpz_class digits(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    result = Rational(digits, scale);
  } else {
    if (!all_digits(text)) throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    result = Rational(mpz_class(std::string(text), 10));
  }
  result.canonicalize();
  return negative ? Rational(-result) : result;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double to_double(const Rational& value) {
  mpfr_t x;
  mpfr_init2(x, 53);
  mpfr_set_q(x, value.get_mpq_t(), MPFR_RNDN);
  double d = mpfr_get_d(x, MPFR_RNDN);
  mpfr_clear(x);
  return d;
}

Rational from_double(double value) {
  if (!std::isfinite(value)) throw std::domain_error("non-finite value cannot be made exact");
  Rational r(value);
  r.canonicalize();
  return r;
}

Rational pow(const Rational& base, int exponent) {
  if (exponent < 0) {
    if (base == 0) throw std::domain_error("division by zero in negative power");
    Rational inv = 1 / base;
    return pow(inv, -exponent);
  }
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

Rational factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(f);
}

bool exact_root(const Rational& value, unsigned n, Rational& root) {
  if (n == 0) return false;
  if (n == 1) {
    root = value;
    return true;
  }
  if (value < 0) {
    if (n % 2 == 0) return false;
    Rational r;
    if (!exact_root(Rational(-value), n, r)) return false;
    root = -r;
    return true;
  }
  mpz_class num, den;
  if (mpz_root(num.get_mpz_t(), value.get_num_mpz_t(), n) == 0) return false;
  if (mpz_root(den.get_mpz_t(), value.get_den_mpz_t(), n) == 0) return false;
  root = Rational(num, den);
  root.canonicalize();
  return true;
}

Rational root_lower_bound(const Rational& value, unsigned n) {
  if (value < 0) throw std::domain_error("root of negative value");
  Rational exact;
  if (exact_root(value, n, exact)) return exact;
  const mpz_class scale = mpz_class(1) << 40;
  double approx = std::pow(to_double(value), 1.0 / n);
  mpz_class steps(std::floor(approx * std::ldexp(1.0, 40)));
  Rational r(steps, scale);
  r.canonicalize();
  while (r > 0 && pow(r, static_cast<int>(n)) > value) {
    steps -= 1;
    r = Rational(steps, scale);
    r.canonicalize();
  }
  return r;
}

std::size_t bit_size(const Rational& value) {
  std::size_t num = mpz_sizeinbase(value.get_num_mpz_t(), 2);
  std::size_t den = mpz_sizeinbase(value.get_den_mpz_t(), 2);
  return num > den ? num : den;
}

}  // namespace picard
