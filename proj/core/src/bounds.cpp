#include "picard/bounds.hpp"

#include <algorithm>
#include <stdexcept>

#include "picard/errors.hpp"

namespace picard {

std::vector<Interval> LipschitzBox::coordinates() const {
  std::vector<Interval> c{t};
  c.insert(c.end(), omega.begin(), omega.end());
  return c;
}

LipschitzBox compute_box(const TruncatedSeries& u0, const ProblemSpec& spec, const Interval& t, int subdivisions) {
  LipschitzBox box;
  box.t = t;
  box.omega = spec.omega;
  box.padding = spec.R;
  const Interval pad(-spec.R, spec.R);
  for (std::size_t i = 0; i < spec.slots.size(); ++i) {
    const DerivativeSlot& slot = spec.slots[i];
    auto same = std::find_if(spec.slots.begin(), spec.slots.begin() + static_cast<std::ptrdiff_t>(i),
                             [&](const DerivativeSlot& s) { return s.same_derivative(slot); });
    if (same != spec.slots.begin() + static_cast<std::ptrdiff_t>(i)) {
      box.slot_ranges.push_back(box.slot_ranges[static_cast<std::size_t>(same - spec.slots.begin())]);
      continue;
    }
    if (slot.total_order() > u0.order())
      throw std::invalid_argument("u0 order " + std::to_string(u0.order()) + " too low for slot " + slot.name());
    TruncatedSeries d = diff_path(u0, slot.path);
    box.slot_ranges.push_back(box_range(d, t, spec.omega, subdivisions) + pad);
  }
  return box;
}

Rational estimate_M(const Expr& F, const LipschitzBox& box) {
  auto coords = box.coordinates();
  return eval_interval(F, Env<Interval>{coords, box.slot_ranges}).magnitude();
}

LipschitzEstimate estimate_L(const Expr& F, const LipschitzBox& box) {
  auto coords = box.coordinates();
  LipschitzEstimate est;
  est.L = 0;
  for (std::size_t i = 0; i < box.slot_ranges.size(); ++i) {
    const VarRef v = VarRef::slot(static_cast<int>(i));
    Rational bound(0);
    if (depends_on(F, v)) {
      Expr partial = differentiate(F, v);
      bound = eval_interval(partial, Env<Interval>{coords, box.slot_ranges}).magnitude();
    }
    if (bound > est.L) est.L = bound;
    est.per_slot.push_back(bound);
  }
  return est;
}

Rational compute_delta(const Rational& R, int n, const Rational& M, const Rational& T0) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (M < 0) throw std::invalid_argument("M must be non-negative");
  if (M == 0) return T0;
  Rational base = R * factorial(static_cast<unsigned>(n - 1)) / M;
  Rational delta = root_lower_bound(base, static_cast<unsigned>(n));
  return delta < T0 ? delta : T0;
}

Contraction choose_delta1(const Rational& L, int n, const Rational& theta, const Rational& delta) {
  if (!(theta > 0 && theta < 1)) throw std::invalid_argument("contraction target theta must lie in (0, 1)");
  if (L < 0) throw std::invalid_argument("L must be non-negative");
  const Rational fact = factorial(static_cast<unsigned>(n - 1));
  if (L == 0) return {delta, Rational(0)};
  Rational limit = root_lower_bound(theta * fact / L, static_cast<unsigned>(n));
  Rational delta1 = limit < delta ? limit : delta;
  Rational gamma = L * pow(delta1, n) / fact;
  return {delta1, gamma};
}

Rational error_bound(const Rational& R, const Rational& gamma, int p) {
  if (gamma < 0 || gamma >= 1) throw std::invalid_argument("error bound needs 0 <= gamma < 1");
  if (p < 0) throw std::invalid_argument("iteration index must be non-negative");
  return R * pow(gamma, p) / (1 - gamma);
}

BoundsReport compute_bounds(const ProblemSpec& spec, const BoundsOptions& options, ExpansionNotes* notes) {
  const int order = std::max(options.order, spec.m);
  TruncatedSeries u0 = build_u0(spec, order, notes);
  BoundsReport report;
  report.box = compute_box(u0, spec, Interval(-spec.T0, spec.T0), options.subdivisions);
  report.M = estimate_M(spec.F, report.box);
  LipschitzEstimate lip = estimate_L(spec.F, report.box);
  report.L = lip.L;
  report.per_slot = std::move(lip.per_slot);
  report.delta = compute_delta(spec.R, spec.n, report.M, spec.T0);
  report.theta = options.theta;
  Contraction c = choose_delta1(report.L, spec.n, options.theta, report.delta);
  report.delta1 = c.delta1;
  report.gamma = c.gamma;
  return report;
}

}  // namespace picard
