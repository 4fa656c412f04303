#pragma once

#include <random>
#include <string>
#include <vector>

#include "picard/problem.hpp"
#include "picard/rational.hpp"
#include "picard/series.hpp"

namespace picard::testing {

inline constexpr std::uint64_t kSeed = 0x5eed2018;

inline Rational random_rational(std::mt19937_64& rng, int max_num = 9, int max_den = 5) {
  std::uniform_int_distribution<int> num(-max_num, max_num);
  std::uniform_int_distribution<int> den(1, max_den);
  return make_rational(num(rng), den(rng));
}

/// Uniform rational in [lo, hi] with denominator up to 64.
inline Rational random_in(std::mt19937_64& rng, const Rational& lo, const Rational& hi) {
  std::uniform_int_distribution<int> step(0, 64);
  return lo + (hi - lo) * make_rational(step(rng), 64);
}

inline Monomial random_monomial(std::mt19937_64& rng, int vars, int max_degree) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<int> pick(0, vars - 1);
  Monomial m(static_cast<std::size_t>(vars), 0);
  int d = deg(rng);
  for (int i = 0; i < d; ++i) ++m[static_cast<std::size_t>(pick(rng))];
  return m;
}

inline TruncatedSeries random_series(std::mt19937_64& rng, const SeriesSpace& space, int order, int terms = 6) {
  TruncatedSeries s(space, order);
  for (int i = 0; i < terms; ++i) s.add_term(random_monomial(rng, space.variable_count(), order), random_rational(rng));
  return s;
}

/// Polynomial text in the given atoms: sum of up to `terms` products of at
/// most `factors` atoms with small rational coefficients.
inline std::string random_polynomial_text(std::mt19937_64& rng, const std::vector<std::string>& atoms, int terms = 3,
                                          int factors = 2) {
  std::uniform_int_distribution<int> count(1, terms);
  std::uniform_int_distribution<int> fcount(0, factors);
  std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
  std::string out;
  int n = count(rng);
  for (int i = 0; i < n; ++i) {
    Rational c = random_rational(rng, 5, 3);
    if (c == 0) c = 1;
    std::string term = "(" + to_string(c) + ")";
    int f = fcount(rng);
    for (int j = 0; j < f; ++j) term += "*" + atoms[pick(rng)];
    out += (i ? " + " : "") + term;
  }
  return out;
}

inline std::vector<std::string> coordinate_names(int k) {
  std::vector<std::string> out{"t"};
  for (int i = 1; i <= k; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

}  // namespace picard::testing
