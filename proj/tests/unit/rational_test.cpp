#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "picard/rational.hpp"
#include "test_support.hpp"

namespace picard {
namespace {

TEST(Rational, ParsesIntegersFractionsAndDecimals) {
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational("-3/4"), Rational(-3, 4));
  EXPECT_EQ(parse_rational("0.125"), Rational(1, 8));
  EXPECT_EQ(parse_rational("6/8"), Rational(3, 4));
  EXPECT_EQ(parse_rational(" +2 "), Rational(2));
  EXPECT_EQ(parse_rational(".5"), Rational(1, 2));
}

TEST(Rational, RejectsMalformedText) {
  for (const char* bad : {"", "1/0", "abc", "1.2.3", "1/", "/2", "--1", "1e5", "."})
    EXPECT_THROW(parse_rational(bad), std::invalid_argument) << bad;
}

TEST(Rational, PrintsLowestTerms) {
  EXPECT_EQ(to_string(make_rational(6, -8)), "-3/4");
  EXPECT_EQ(to_string(make_rational(10, 5)), "2");
  EXPECT_THROW(make_rational(1, 0), std::invalid_argument);
}

TEST(Rational, DoubleConversionRoundsToNearest) {
  EXPECT_EQ(to_double(Rational(1, 10)), 0.1);
  EXPECT_EQ(to_double(Rational(1, 3)), 1.0 / 3.0);
  EXPECT_EQ(to_double(Rational(2, 3)), 2.0 / 3.0);
  EXPECT_EQ(from_double(0.1), Rational(mpz_class("3602879701896397"), mpz_class("36028797018963968")));
  EXPECT_THROW(from_double(std::nan("")), std::domain_error);
}

TEST(Rational, PowAbsFactorial) {
  EXPECT_EQ(pow(Rational(-2, 3), 3), Rational(-8, 27));
  EXPECT_EQ(pow(Rational(2), -2), Rational(1, 4));
  EXPECT_EQ(pow(Rational(5), 0), Rational(1));
  EXPECT_THROW(pow(Rational(0), -1), std::domain_error);
  EXPECT_EQ(abs(Rational(-5, 2)), Rational(5, 2));
  EXPECT_EQ(factorial(0), Rational(1));
  EXPECT_EQ(factorial(10), Rational(3628800));
}

TEST(Rational, ExactRoots) {
  Rational r;
  EXPECT_TRUE(exact_root(Rational(8, 27), 3, r));
  EXPECT_EQ(r, Rational(2, 3));
  EXPECT_TRUE(exact_root(Rational(-8), 3, r));
  EXPECT_EQ(r, Rational(-2));
  EXPECT_FALSE(exact_root(Rational(2), 2, r));
  EXPECT_FALSE(exact_root(Rational(-4), 2, r));
  EXPECT_EQ(root_lower_bound(Rational(1, 100), 2), Rational(1, 10));
  EXPECT_THROW(root_lower_bound(Rational(-1), 2), std::domain_error);
}

TEST(RationalProperty, RootLowerBoundIsTightFromBelow) {
  std::mt19937_64 rng(testing::kSeed);
  std::uniform_int_distribution<int> num(1, 100000), den(1, 1000), deg(2, 5);
  const Rational step(1, mpz_class(1) << 40);
  for (int i = 0; i < 200; ++i) {
    Rational v(num(rng), den(rng));
    v.canonicalize();
    const int n = deg(rng);
    Rational r = root_lower_bound(v, static_cast<unsigned>(n));
    EXPECT_LE(pow(r, n), v);
    EXPECT_GT(pow(Rational(r + step), n), v);
  }
}

TEST(Rational, BitSize) {
  EXPECT_EQ(bit_size(Rational(1, 2)), 2u);
  EXPECT_EQ(bit_size(Rational(255)), 8u);
}

}  // namespace
}  // namespace picard
