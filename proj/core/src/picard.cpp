#include "picard/picard.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "picard/errors.hpp"

namespace picard {

namespace {

int max_slot_order(const ProblemSpec& spec, const Expr& e) {
  int best = 0;
  for (int s : referenced_slots(e)) best = std::max(best, spec.slots[static_cast<std::size_t>(s)].total_order());
  return best;
}

}  // namespace

std::vector<TruncatedSeries> slot_series(const TruncatedSeries& u, const ProblemSpec& spec, const std::vector<int>& slots) {
  std::vector<TruncatedSeries> out(spec.slots.size(), TruncatedSeries(u.space(), 0));
  for (int s : slots) {
    const DerivativeSlot& slot = spec.slots.at(static_cast<std::size_t>(s));
    if (slot.total_order() > u.order())
      throw ProblemError("truncation order exhausted: series of order " + std::to_string(u.order()) +
                         " cannot supply slot " + slot.name());
    out[static_cast<std::size_t>(s)] = diff_path(u, slot.path);
    for (const auto& alias : spec.slots) {
      if (!alias.same_derivative(slot) || alias.path == slot.path) continue;
      if (!(diff_path(u, alias.path) == out[static_cast<std::size_t>(s)]))
        throw std::logic_error("mixed partial derivatives disagree for slot " + slot.name());
    }
  }
  return out;
}

PicardOperator::PicardOperator(const ProblemSpec& spec, int order, StartRoute route, ExpansionNotes* notes)
    : spec_(spec), route_(route), notes_(notes) {
  if (route == StartRoute::Corollary) {
    if (!spec.split) throw ProblemError("corollary route needs a split F = G + g");
    integrand_expr_ = spec.split->G;
    base_ = build_u0_bar(spec, order, notes);
  } else {
    integrand_expr_ = spec.F;
    base_ = build_u0(spec, order, notes);
  }
}

int PicardOperator::order_loss() const { return std::max(0, max_slot_order(spec_, integrand_expr_) - spec_.n); }

TruncatedSeries PicardOperator::integrand(const TruncatedSeries& u, int order) const {
  auto slots = slot_series(u, spec_, referenced_slots(integrand_expr_));
  auto coords = coordinate_series(u.space(), order);
  return eval_series(integrand_expr_, Env<TruncatedSeries>{coords, slots}, order, notes_);
}

TruncatedSeries PicardOperator::apply(const TruncatedSeries& u) const {
  const int order = base_.order() - spec_.n;
  if (order < 0) return base_;
  return base_ + volterra_integrate(integrand(u, order), spec_.n);
}

TruncatedSeries apply_T(const TruncatedSeries& u, const ProblemSpec& spec, int order) {
  return PicardOperator(spec, order).apply(u);
}

bool satisfies_initial_conditions(const TruncatedSeries& u, const ProblemSpec& spec) {
  for (int i = 1; i <= spec.n; ++i) {
    const int shift = i - 1;
    if (shift > u.order()) break;
    TruncatedSeries d = u;
    for (int j = 0; j < shift; ++j) d = diff(d, 0);
    TruncatedSeries at_zero(u.space(), d.order());
    for (const auto& [m, c] : d.terms())
      if (m[0] == 0) at_zero.add_term(m, c);
    TruncatedSeries expected = initial_function_series(spec, static_cast<std::size_t>(shift), d.order());
    if (!(at_zero == expected)) return false;
  }
  return true;
}

double residual(const TruncatedSeries& u, const ProblemSpec& spec, const Grid& grid) {
  if (grid.empty()) throw std::invalid_argument("empty grid");
  if (u.order() < spec.n) throw std::invalid_argument("residual needs a series of order >= n");
  auto used = referenced_slots(spec.F);
  auto slots = slot_series(u, spec, used);
  TruncatedSeries lhs = u;
  for (int j = 0; j < spec.n; ++j) lhs = diff(lhs, 0);
  double worst = 0.0;
  for (const auto& p : grid.points) {
    std::vector<Number> coords(p.begin(), p.end());
    std::vector<Number> values(spec.slots.size(), Number(Rational(0)));
    for (int s : used) values[static_cast<std::size_t>(s)] = evaluate(slots[static_cast<std::size_t>(s)], p);
    Number rhs = eval_scalar(spec.F, Env<Number>{coords, values});
    Rational left = evaluate(lhs, p);
    double r = is_exact(rhs) ? to_double(Rational(left - std::get<Rational>(rhs))) : to_double(left) - std::get<double>(rhs);
    worst = std::max(worst, std::fabs(r));
  }
  if (!std::isfinite(worst)) throw DomainError("non-finite residual");
  return worst;
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::MaxIterations:
      return "max-iters";
    case StopReason::ToleranceMet:
      return "tolerance met";
    case StopReason::CoefficientFixpoint:
      return "coefficient fixpoint";
  }
  return "?";
}

int default_order(const ProblemSpec& spec, int max_iters) {
  constexpr int kProbe = 16;
  int deg = build_u0(spec, kProbe).degree();
  if (deg >= kProbe) deg = 8;
  return spec.n * max_iters + std::max(deg, 0);
}

namespace {

std::size_t coefficient_bits(const TruncatedSeries& u) {
  std::size_t bits = 0;
  for (const auto& [m, c] : u.terms()) bits = std::max(bits, bit_size(c));
  return bits;
}

Rational top_layer_magnitude(const TruncatedSeries& u) {
  Rational best(0);
  for (const auto& [m, c] : u.terms())
    if (total_degree(m) == u.order()) best = std::max(best, abs(c));
  return best;
}

std::optional<double> checked(double v) {
  if (!std::isfinite(v)) throw DomainError("non-finite iteration diagnostic");
  return v;
}

}  // namespace

IterationReport iterate(const ProblemSpec& spec, const IterationOptions& options) {
  if (options.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  IterationReport report;
  report.route = options.route.value_or(spec.split ? StartRoute::Corollary : StartRoute::Standard);
  report.order = options.order.value_or(default_order(spec, options.max_iters));
  if (report.order < 0) throw std::invalid_argument("truncation order must be non-negative");

  BoundsOptions bopts;
  bopts.theta = options.theta;
  bopts.order = std::max(report.order, spec.m);
  bopts.subdivisions = options.bounds_subdivisions;
  try {
    report.bounds = compute_bounds(spec, bopts, &report.notes);
  } catch (const DomainError& err) {
    if (!options.force) throw;
    report.bounds_failure = err.what();
  }

  Rational half = (report.bounds ? report.bounds->delta1 : spec.T0) * Rational(9, 10);
  if (options.grid_t_max && *options.grid_t_max < half) half = *options.grid_t_max;
  half.canonicalize();
  report.grid_t_half_width = half;
  report.grid = make_uniform_grid(half, options.grid_t, spec.omega, options.grid_x);

  const int probe_loss = std::max(0, spec.max_referenced_order() - spec.n);
  PicardOperator op(spec, report.order + options.max_iters * probe_loss, report.route, &report.notes);

  const int N = std::max(spec.m, spec.n);
  const int r_max = std::max(max_slot_order(spec, spec.F), spec.n);
  const double delta1 = to_double(report.bounds ? report.bounds->delta1 : spec.T0);

  auto make_step = [&](int p, TruncatedSeries u) {
    IterationStep step;
    step.p = p;
    step.u = std::move(u);
    if (report.bounds) step.bound = error_bound(spec.R, report.bounds->gamma, p);
    step.coefficient_bits = coefficient_bits(step.u);
    step.truncation_allowance = std::pow(delta1, step.u.order() + 1) * to_double(top_layer_magnitude(step.u));
    if (step.u.order() >= r_max) step.residual = checked(residual(step.u, spec, report.grid));
    if (!satisfies_initial_conditions(step.u, spec)) report.initial_conditions_ok = false;
    return step;
  };

  report.steps.push_back(make_step(0, op.base()));
  for (int p = 1; p <= options.max_iters; ++p) {
    const TruncatedSeries& prev = report.steps.back().u;
    TruncatedSeries next = op(prev);
    const int common = std::min(next.order(), prev.order());
    TruncatedSeries delta = next.truncated(common) - prev.truncated(common);
    IterationStep step = make_step(p, std::move(next));
    step.diff_norm = checked(grid_sup_norm(delta, report.grid, 0, spec.n));
    if (common >= N) step.diff_norm_cn = checked(grid_sup_norm(delta, report.grid, N, spec.n));
    report.steps.push_back(std::move(step));
    if (delta.is_zero()) {
      report.stop_reason = StopReason::CoefficientFixpoint;
      break;
    }
    if (options.tolerance > 0 && *report.steps.back().diff_norm <= to_double(options.tolerance)) {
      report.stop_reason = StopReason::ToleranceMet;
      break;
    }
  }

  if (!report.bounds) {
    report.contraction_ok = false;
    return report;
  }
  const double gamma = to_double(report.bounds->gamma);
  for (std::size_t i = 2; i < report.steps.size(); ++i) {
    const auto& cur = report.steps[i];
    const auto& before = report.steps[i - 1];
    if (*cur.diff_norm > (gamma + 1e-6) * *before.diff_norm + cur.truncation_allowance) report.contraction_ok = false;
  }
  return report;
}

std::vector<ComparisonRow> compare_to_reference(const IterationReport& report, const ProblemSpec& spec, const Expr& reference,
                                                const Grid& grid) {
  if (grid.empty()) throw std::invalid_argument("empty grid");
  if (!report.bounds) throw std::invalid_argument("comparison needs established bounds");
  const int N = std::max(spec.m, spec.n);
  // (t-order, x-orders) for every derivative in the C^N reading.
  std::vector<std::vector<int>> derivs;
  {
    std::vector<int> orders(static_cast<std::size_t>(spec.k) + 1, 0);
    auto rec = [&](auto&& self, std::size_t var, int remaining) -> void {
      if (var == orders.size()) {
        derivs.push_back(orders);
        return;
      }
      int cap = var == 0 ? std::min(remaining, spec.n - 1) : remaining;
      for (int o = 0; o <= cap; ++o) {
        orders[var] = o;
        self(self, var + 1, remaining - o);
      }
      orders[var] = 0;
    };
    rec(rec, 0, N);
  }
  std::vector<Expr> ref_derivs;
  for (const auto& orders : derivs) {
    Expr d = reference;
    for (std::size_t v = 0; v < orders.size(); ++v)
      for (int j = 0; j < orders[v]; ++j) d = differentiate(d, VarRef::coordinate(static_cast<int>(v)));
    ref_derivs.push_back(d);
  }

  std::vector<ComparisonRow> rows;
  for (const auto& step : report.steps) {
    ComparisonRow row;
    row.p = step.p;
    row.bound = *step.bound;
    for (std::size_t i = 0; i < derivs.size(); ++i) {
      const int total = std::accumulate(derivs[i].begin(), derivs[i].end(), 0);
      if (total > step.u.order()) continue;
      TruncatedSeries d = diff_orders(step.u, derivs[i][0], std::span<const int>(derivs[i]).subspan(1));
      for (const auto& p : grid.points) {
        std::vector<Number> coords(p.begin(), p.end());
        double ref = to_double(eval_scalar(ref_derivs[i], Env<Number>{coords, {}}));
        double err = std::fabs(to_double(evaluate(d, p)) - ref);
        if (!std::isfinite(err)) throw DomainError("non-finite reference comparison");
        row.emp_error_cn = std::max(row.emp_error_cn, err);
        if (total == 0) row.emp_error = std::max(row.emp_error, err);
      }
    }
    row.violated = row.emp_error > to_double(row.bound);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace picard
