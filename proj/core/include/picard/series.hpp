#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "picard/elementary.hpp"
#include "picard/interval.hpp"
#include "picard/rational.hpp"

namespace picard {

/// Exponents (t, x1, ..., xk) of one monomial.
using Monomial = std::vector<int>;

int total_degree(const Monomial& m);

/// Graded lexicographic order: lower total degree first, then larger
/// exponents of earlier variables first (t^2 < t*x < x^2 within degree 2).
struct GradedLex {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Variables and expansion point shared by a family of series. The series
/// variables are t and X_i = x_i - x0_i; t is always expanded at 0.
struct SeriesSpace {
  int spatial_dim = 1;
  std::vector<Rational> x0;

  SeriesSpace() = default;
  SeriesSpace(int k, std::vector<Rational> expansion_point);
  static SeriesSpace at_origin(int k);

  int variable_count() const { return spatial_dim + 1; }
  friend bool operator==(const SeriesSpace&, const SeriesSpace&) = default;
};

/// Multivariate Taylor polynomial truncated at total degree `order`, with
/// exact rational coefficients. Coefficients above the order are never
/// stored; neither are zeros.
class TruncatedSeries {
 public:
  using Terms = std::map<Monomial, Rational, GradedLex>;

  TruncatedSeries() = default;
  TruncatedSeries(SeriesSpace space, int order);

  static TruncatedSeries constant(const SeriesSpace& space, int order, const Rational& value);
  /// Coordinate function: t for index 0, x0_i + X_i for index i >= 1.
  static TruncatedSeries coordinate(const SeriesSpace& space, int order, int index);
  static TruncatedSeries monomial(const SeriesSpace& space, int order, Monomial exponents, const Rational& coefficient);

  const SeriesSpace& space() const { return space_; }
  int order() const { return order_; }
  int variable_count() const { return space_.variable_count(); }
  const Terms& terms() const { return terms_; }

  Rational coefficient(const Monomial& m) const;
  Rational constant_term() const;
  bool is_zero() const { return terms_.empty(); }
  /// Highest total degree with a nonzero coefficient, -1 for the zero series.
  int degree() const;

  /// Adds c to the coefficient of m; silently drops terms above the order.
  void add_term(const Monomial& m, const Rational& c);

  TruncatedSeries truncated(int order) const;

  TruncatedSeries& operator+=(const TruncatedSeries& other);
  TruncatedSeries& operator-=(const TruncatedSeries& other);
  TruncatedSeries& operator*=(const Rational& c);

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator-(TruncatedSeries a) { return a *= Rational(-1); }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator*(TruncatedSeries a, const Rational& c) { return a *= c; }
  friend TruncatedSeries operator*(const Rational& c, TruncatedSeries a) { return a *= c; }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.order_ == b.order_ && a.space_ == b.space_ && a.terms_ == b.terms_;
  }

 private:
  void require_compatible(const TruncatedSeries& other) const;

  SeriesSpace space_;
  int order_ = 0;
  Terms terms_;
};

TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries scale(const TruncatedSeries& a, const Rational& c);

/// Partial derivative in variable `index` (0 = t). Order drops by one.
TruncatedSeries diff(const TruncatedSeries& a, int index);
/// Applies diff along each index of `path` in turn.
TruncatedSeries diff_path(const TruncatedSeries& a, std::span<const int> path);
/// Derivative of t-order `t_order` and spatial orders `x_orders`.
TruncatedSeries diff_orders(const TruncatedSeries& a, int t_order, std::span<const int> x_orders);

/// n-fold repeated integral in t from 0, i.e. the kernel
/// f -> \int_0^t (t - s)^(n-1) / (n-1)! f(s, x) ds. Order rises by n.
TruncatedSeries volterra_integrate(const TruncatedSeries& f, int n);

/// Exact value at the point (t, x1, ..., xk) in absolute coordinates.
Rational evaluate(const TruncatedSeries& a, std::span<const Rational> point);
double evaluate(const TruncatedSeries& a, std::span<const double> point);

/// Enclosure of the range over t x box (absolute coordinates). With
/// subdivisions s > 1 every axis is split into s equal cells.
Interval box_range(const TruncatedSeries& a, const Interval& t, std::span<const Interval> x_box, int subdivisions = 1);

using GridPoint = std::vector<Rational>;  // (t, x1, ..., xk)

struct Grid {
  std::vector<GridPoint> points;
  bool empty() const { return points.empty(); }
};

/// Uniform tensor grid: t_count points across [-t_half_width, t_half_width]
/// and x_count points along every axis of omega (midpoint when count is 1).
Grid make_uniform_grid(const Rational& t_half_width, int t_count, std::span<const Interval> omega, int x_count);

/// Max over grid points and over all derivatives (a0, alpha) with a0 < n and
/// a0 + |alpha| <= N of the derivative's absolute value.
double grid_sup_norm(const TruncatedSeries& a, const Grid& grid, int N, int n);

/// Collects approximations made while expanding non-polynomial functions.
struct ExpansionNotes {
  bool inexact = false;
  std::vector<std::string> messages;
  void note(std::string message);
};

/// 1 / a; throws DomainError when the constant term is zero.
TruncatedSeries reciprocal(const TruncatedSeries& a);
TruncatedSeries pow(const TruncatedSeries& a, int exponent);
/// a^r for a non-integer rational r; needs a positive constant term.
TruncatedSeries rational_pow(const TruncatedSeries& a, const Rational& exponent, ExpansionNotes* notes = nullptr);
/// f(a) via the univariate Taylor expansion of f at a's constant term.
TruncatedSeries apply_function(ElementaryFunction f, const TruncatedSeries& a, ExpansionNotes* notes = nullptr);

/// Variable names for printing: t, x (k = 1) or x1..xk.
std::vector<std::string> default_variable_names(int spatial_dim);

/// Graded-lex rendering with exact rationals, e.g. "1 + 1*t + 3/2*t^2".
std::string to_string(const TruncatedSeries& a);
std::ostream& operator<<(std::ostream& os, const TruncatedSeries& a);

}  // namespace picard
