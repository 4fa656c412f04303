#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "picard/bounds.hpp"
#include "picard/expr.hpp"
#include "picard/problem.hpp"
#include "picard/rational.hpp"
#include "picard/series.hpp"

namespace picard {

enum class StartRoute {
  Standard,   // u_p = u0 + V_n F(u_{p-1}), starting from u0
  Corollary,  // u_p = ū0 + V_n G(u_{p-1}), starting from ū0 = u0 + V_n g
};

/// The integral operator T u = base + V_n integrand(u) for one problem.
///
/// Iterates lose max(0, r - n) degrees of validity per application, where r is
/// the highest derivative order F uses: a slot derivative of order r of a
/// series known to degree D is only known to degree D - r. The operator
/// reports that honestly through the order of its result.
class PicardOperator {
 public:
  /// `order` is the truncation order of the base series u0 (or ū0).
  PicardOperator(const ProblemSpec& spec, int order, StartRoute route = StartRoute::Standard,
                 ExpansionNotes* notes = nullptr);

  TruncatedSeries operator()(const TruncatedSeries& u) const { return apply(u); }
  TruncatedSeries apply(const TruncatedSeries& u) const;

  /// F (or G) composed with the slot derivatives of u, truncated at `order`.
  TruncatedSeries integrand(const TruncatedSeries& u, int order) const;

  /// u0 for the standard route, ū0 for the corollary route.
  const TruncatedSeries& base() const { return base_; }
  int order() const { return base_.order(); }
  /// Degrees of validity lost by one application.
  int order_loss() const;

 private:
  const ProblemSpec& spec_;
  StartRoute route_;
  Expr integrand_expr_;
  TruncatedSeries base_;
  ExpansionNotes* notes_;
};

/// T u with the standard route at truncation order `order`.
TruncatedSeries apply_T(const TruncatedSeries& u, const ProblemSpec& spec, int order);

/// Slot-derivative series of u for every slot index in `slots`, checking on
/// the way that every alternative derivative path gives the same series.
std::vector<TruncatedSeries> slot_series(const TruncatedSeries& u, const ProblemSpec& spec, const std::vector<int>& slots);

/// d^(i-1)u/dt^(i-1)(0, .) equals the c_i series for i = 1..n (up to u's order).
bool satisfies_initial_conditions(const TruncatedSeries& u, const ProblemSpec& spec);

/// max over the grid of |d^n u / dt^n - F(t, x, slots of u)|.
double residual(const TruncatedSeries& u, const ProblemSpec& spec, const Grid& grid);

enum class StopReason { MaxIterations, ToleranceMet, CoefficientFixpoint };
std::string_view to_string(StopReason reason);

struct IterationOptions {
  std::optional<int> order;  // default: n * max_iters + degree of u0
  int max_iters = 6;
  Rational tolerance{0};  // <= 0 disables the tolerance stop
  Rational theta{1, 2};
  int grid_t = 9;
  int grid_x = 5;
  std::optional<Rational> grid_t_max;
  int bounds_subdivisions = 1;
  std::optional<StartRoute> route;  // default: corollary iff a split is given
  /// Keep iterating when the bounds cannot be established (no bound column).
  bool force = false;
};

struct IterationStep {
  int p = 0;
  TruncatedSeries u;
  std::optional<double> diff_norm;     // sup |u_p - u_{p-1}| on the grid
  std::optional<double> diff_norm_cn;  // same with all derivatives up to N = max(m, n)
  std::optional<double> residual;
  std::optional<Rational> bound;       // R gamma^p / (1 - gamma)
  double truncation_allowance = 0.0;
  std::size_t coefficient_bits = 0;
};

struct IterationReport {
  std::optional<BoundsReport> bounds;
  std::string bounds_failure;  // set when bounds failed under `force`
  int order = 0;
  StartRoute route = StartRoute::Standard;
  Rational grid_t_half_width;
  Grid grid;
  std::vector<IterationStep> steps;  // p = 0..P
  StopReason stop_reason = StopReason::MaxIterations;
  bool initial_conditions_ok = true;
  bool contraction_ok = true;
  ExpansionNotes notes;
};

/// Default truncation order n * max_iters + degree(u0) (degree capped at 8
/// for non-polynomial initial data).
int default_order(const ProblemSpec& spec, int max_iters);

/// Runs u_p = T u_{p-1} and records diagnostics on a grid inside (-delta1, delta1) x omega.
IterationReport iterate(const ProblemSpec& spec, const IterationOptions& options);

struct ComparisonRow {
  int p = 0;
  double emp_error = 0.0;     // sup |u_p - reference| on the grid
  double emp_error_cn = 0.0;  // including derivatives up to N = max(m, n)
  Rational bound;
  bool violated = false;  // emp_error > bound
};

std::vector<ComparisonRow> compare_to_reference(const IterationReport& report, const ProblemSpec& spec, const Expr& reference,
                                                const Grid& grid);

}  // namespace picard
