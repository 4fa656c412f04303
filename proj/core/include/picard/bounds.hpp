#pragma once

#include <vector>

#include "picard/expr.hpp"
#include "picard/interval.hpp"
#include "picard/problem.hpp"
#include "picard/rational.hpp"
#include "picard/series.hpp"

namespace picard {

/// Compact set J x prod [c_slot, d_slot] on which F is bounded and Lipschitz.
struct LipschitzBox {
  Interval t;
  std::vector<Interval> omega;
  std::vector<Interval> slot_ranges;  // one per enumerated slot
  Rational padding;

  /// Coordinate intervals (t, x1..xk) for interval evaluation.
  std::vector<Interval> coordinates() const;
};

/// Range of every slot derivative of u0 over t x omega, widened by R.
LipschitzBox compute_box(const TruncatedSeries& u0, const ProblemSpec& spec, const Interval& t, int subdivisions = 1);

/// Upper bound of |F| over the box.
Rational estimate_M(const Expr& F, const LipschitzBox& box);

struct LipschitzEstimate {
  Rational L;
  std::vector<Rational> per_slot;  // bound of |dF/dy_i| for every slot
};

/// L = max_i sup |dF/dy_i| over the box; satisfies the summed Lipschitz form.
LipschitzEstimate estimate_L(const Expr& F, const LipschitzBox& box);

/// min(T0, (R (n-1)! / M)^(1/n)), rounded down to a rational; T0 when M = 0.
Rational compute_delta(const Rational& R, int n, const Rational& M, const Rational& T0);

struct Contraction {
  Rational delta1;
  Rational gamma;
};

/// Largest (rounded-down) delta1 <= delta with gamma = L delta1^n / (n-1)! <= theta.
Contraction choose_delta1(const Rational& L, int n, const Rational& theta, const Rational& delta);

/// R gamma^p / (1 - gamma); throws std::invalid_argument for gamma >= 1.
Rational error_bound(const Rational& R, const Rational& gamma, int p);

struct BoundsOptions {
  Rational theta{1, 2};
  int order = 8;         // order of the u0 expansion used for the box
  int subdivisions = 1;  // per axis, for the u0 range enclosures
};

struct BoundsReport {
  LipschitzBox box;
  Rational M;
  Rational L;
  std::vector<Rational> per_slot;
  Rational delta;
  Rational delta1;
  Rational gamma;
  Rational theta;
};

/// Box over [-T0, T0] x omega (a superset of the final J), then M, L, delta,
/// delta1 and gamma.
BoundsReport compute_bounds(const ProblemSpec& spec, const BoundsOptions& options, ExpansionNotes* notes = nullptr);

}  // namespace picard
