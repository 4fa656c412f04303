#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "picard/expr.hpp"
#include "picard/interval.hpp"
#include "picard/rational.hpp"
#include "picard/series.hpp"

namespace picard {

/// One argument of F: a derivative of u with t-order `t_order` and spatial
/// orders `x_orders`. `path` lists the coordinates (0 = t, i = x_i) in the
/// order the gradient operators were applied; symmetric duplicates share
/// (t_order, x_orders) but differ in path.
struct DerivativeSlot {
  int t_order = 0;
  std::vector<int> x_orders;
  std::vector<int> path;

  int total_order() const;
  /// Same derivative regardless of path.
  bool same_derivative(const DerivativeSlot& other) const {
    return t_order == other.t_order && x_orders == other.x_orders;
  }
  /// "u", "u_t", "u_xx" (k = 1) or "u_{t x1 x2}".
  std::string name() const;
};

/// Number of u-dependent arguments of F: K1 when m < n, K2 otherwise (with
/// the geometric sum evaluated as m - n + 2 when k = 1).
std::uint64_t arg_count(int n, int k, int m);

/// Full tensor enumeration u, grad u, ..., grad^m u (m < n) or
/// u, ..., grad^(n-1) u, D grad^(n-1) u, ..., D^(m-n+1) grad^(n-1) u (m >= n).
std::vector<DerivativeSlot> enumerate_slots(int n, int k, int m);

/// Index of the first slot with the given derivative orders.
std::optional<int> canonical_slot(const std::vector<DerivativeSlot>& slots, int t_order, const std::vector<int>& x_orders);

/// Decodes "u", "u_t", "u_xx", "u_tx", "u_{t x1 x2}" into (t_order, x_orders).
/// Returns nullopt for names that are not derivative tokens.
std::optional<std::pair<int, std::vector<int>>> parse_derivative_token(std::string_view name, int k);

/// Optional decomposition F = G + g with g independent of u.
struct ForcingSplit {
  Expr G;
  Expr g;
};

/// Initial value problem  d^n u / dt^n = F(t, x, u, grad u, ...)  with
/// d^(i-1)u/dt^(i-1)(0, x) = c_i(x).
struct ProblemSpec {
  int n = 1;
  int k = 1;
  int m = 0;
  Expr F;
  std::vector<Expr> initial;
  std::optional<ForcingSplit> split;
  std::vector<Interval> omega;
  std::vector<Rational> x0;
  Rational R{1};
  Rational T0{1};
  std::map<std::string, Rational> params;
  std::vector<DerivativeSlot> slots;

  SeriesSpace space() const { return SeriesSpace(k, x0); }
  /// Highest derivative order among the slots F actually references.
  int max_referenced_order() const;
};

/// Raw ingredients of a problem, expressions still as text.
struct ProblemDefinition {
  int n = 1;
  int k = 1;
  int m = 0;
  std::string F;
  std::vector<std::string> initial;
  std::optional<std::pair<std::string, std::string>> split;  // (G, g)
  std::vector<Interval> omega;
  std::vector<Rational> x0;
  Rational R{1};
  Rational T0{1};
  std::map<std::string, Rational> params;
};

enum class ExprRole { RightHandSide, Initial, Forcing, Reference };

/// Name table for one expression role: F sees t, x and u-slots; initial
/// functions only x; forcing terms and reference solutions t and x.
VariableTable make_variable_table(int n, int k, int m, const std::vector<DerivativeSlot>& slots,
                                  const std::map<std::string, Rational>& params, ExprRole role);

/// Parses, binds parameters and validates all invariants; throws ProblemError
/// or ParseError.
ProblemSpec build_problem(const ProblemDefinition& def);

/// Parses an expression over (t, x) for the given problem, e.g. a reference solution.
Expr parse_for_problem(const ProblemSpec& spec, std::string_view text, ExprRole role);

/// Series of c_i(x) around x0 at the given order.
TruncatedSeries initial_function_series(const ProblemSpec& spec, std::size_t i, int order, ExpansionNotes* notes = nullptr);

/// u0 = sum_i c_i(x) t^(i-1) / (i-1)!.
TruncatedSeries build_u0(const ProblemSpec& spec, int order, ExpansionNotes* notes = nullptr);

/// u0 + V_n g; throws ProblemError when no split is given.
TruncatedSeries build_u0_bar(const ProblemSpec& spec, int order, ExpansionNotes* notes = nullptr);

}  // namespace picard
