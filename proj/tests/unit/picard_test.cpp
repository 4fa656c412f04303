#include <gtest/gtest.h>

#include <random>

#include "picard/errors.hpp"
#include "picard/picard.hpp"
#include "test_support.hpp"

namespace picard {
namespace {

ProblemSpec make(ProblemDefinition d) { return build_problem(d); }

ProblemDefinition def(int n, int k, int m, std::string F, std::vector<std::string> init, std::vector<Interval> omega,
                      std::vector<Rational> x0) {
  ProblemDefinition d;
  d.n = n;
  d.k = k;
  d.m = m;
  d.F = std::move(F);
  d.initial = std::move(init);
  d.omega = std::move(omega);
  d.x0 = std::move(x0);
  return d;
}

ProblemDefinition example2() { return def(1, 1, 0, "t^3 + 3*t^2 + 3*t + 2 - u^3", {"1"}, {Interval(0)}, {Rational(0)}); }
ProblemDefinition example3() { return def(1, 1, 1, "x^2 - 1/4*u_x^2", {"0"}, {Interval(-1, 1)}, {Rational(0)}); }

// Univariate polynomials in t for the oracles below.
using Poly = std::vector<Rational>;

Poly mul(const Poly& a, const Poly& b, std::size_t degree) {
  Poly r(degree + 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size() && i + j <= degree; ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly integrate(const Poly& a, std::size_t degree) {
  Poly r(degree + 1, Rational(0));
  for (std::size_t i = 0; i + 1 <= degree && i < a.size(); ++i) r[i + 1] = a[i] / Rational(static_cast<long>(i + 1));
  return r;
}

// Example 2 oracle: u_p = 1 + int (t^3 + 3t^2 + 3t + 2 - u_{p-1}^3), truncated at degree d.
Poly example2_oracle(int p, std::size_t d) {
  Poly u(d + 1, Rational(0));
  u[0] = 1;
  for (int i = 0; i < p; ++i) {
    Poly f = mul(mul(u, u, d), u, d);
    for (auto& c : f) c = -c;
    Poly g{2, 3, 3, 1};
    for (std::size_t j = 0; j < g.size() && j <= d; ++j) f[j] += g[j];
    u = integrate(f, d);
    u[0] += 1;
  }
  return u;
}

// Example 3 oracle: u = x^2 w(t) with w_p = int (1 - w_{p-1}^2).
Poly example3_oracle(int p, std::size_t d) {
  Poly w(d + 1, Rational(0));
  for (int i = 0; i < p; ++i) {
    Poly f = mul(w, w, d);
    for (auto& c : f) c = -c;
    f[0] += 1;
    w = integrate(f, d);
  }
  return w;
}

TEST(Picard, Example2GoldenIterates) {
  ProblemSpec spec = make(example2());
  IterationOptions o;
  o.order = 4;
  o.max_iters = 3;
  IterationReport r = iterate(spec, o);
  ASSERT_EQ(r.steps.size(), 4u);
  EXPECT_EQ(to_string(r.steps[1].u), "1 + 1*t + 3/2*t^2 + 1*t^3 + 1/4*t^4");
  EXPECT_EQ(to_string(r.steps[2].u), "1 + 1*t - 3/2*t^3 - 3*t^4");
  EXPECT_EQ(to_string(r.steps[3].u), "1 + 1*t + 9/8*t^4");
}

TEST(Picard, Example2MatchesOracleAtHigherOrder) {
  ProblemSpec spec = make(example2());
  for (int d : {4, 6, 9}) {
    TruncatedSeries u = build_u0(spec, d);
    for (int p = 1; p <= 5; ++p) {
      u = apply_T(u, spec, d);
      Poly want = example2_oracle(p, static_cast<std::size_t>(d));
      for (int j = 0; j <= d; ++j) EXPECT_EQ(u.coefficient({j, 0}), want[static_cast<std::size_t>(j)]) << p << ' ' << j;
    }
  }
}

TEST(Picard, Example3IteratesMatchOracle) {
  ProblemSpec spec = make(example3());
  IterationOptions o;
  o.order = 9;
  o.max_iters = 4;
  IterationReport r = iterate(spec, o);
  EXPECT_EQ(to_string(r.steps[1].u), "1*t*x^2");
  EXPECT_EQ(to_string(r.steps[2].u), "1*t*x^2 - 1/3*t^3*x^2");
  const TruncatedSeries& u4 = r.steps[4].u;
  EXPECT_EQ(u4.coefficient({5, 2}), Rational(2, 15));
  EXPECT_EQ(u4.coefficient({7, 2}), Rational(-17, 315));
  Poly w = example3_oracle(4, 7);
  for (const auto& [m, c] : u4.terms()) {
    EXPECT_EQ(m[1], 2);
    EXPECT_EQ(c, w[static_cast<std::size_t>(m[0])]);
  }
}

TEST(Picard, OrderLossIsReportedHonestly) {
  ProblemDefinition d = def(1, 1, 3, "-6*u^2*u_x - u_xxx", {"sech(x)"}, {Interval(-1, 1)}, {Rational(1, 2)});
  ProblemSpec spec = make(d);
  PicardOperator op(spec, 10);
  EXPECT_EQ(op.order_loss(), 2);
  TruncatedSeries u1 = op(op.base());
  EXPECT_EQ(u1.order(), 8);
  IterationOptions o;
  o.order = 5;
  o.max_iters = 2;
  IterationReport r = iterate(spec, o);
  EXPECT_EQ(r.steps.back().u.order(), 5);
  EXPECT_TRUE(r.notes.inexact);
}

TEST(Picard, TruncationExhaustionIsAnError) {
  ProblemSpec spec = make(def(1, 1, 3, "u_xxx", {"x^3"}, {Interval(-1, 1)}, {Rational(0)}));
  TruncatedSeries low = build_u0(spec, 2);
  EXPECT_THROW(slot_series(low, spec, {3}), ProblemError);
}

TEST(Picard, StopReasons) {
  ProblemSpec zero = make(def(1, 1, 0, "0", {"1 + x"}, {Interval(-1, 1)}, {Rational(0)}));
  IterationReport r = iterate(zero, IterationOptions{});
  EXPECT_EQ(r.stop_reason, StopReason::CoefficientFixpoint);
  EXPECT_EQ(r.steps.size(), 2u);
  EXPECT_EQ(to_string(r.stop_reason), "coefficient fixpoint");

  ProblemSpec spec = make(example3());
  IterationOptions o;
  o.order = 9;
  o.max_iters = 10;
  o.tolerance = Rational(1, 1000);
  o.grid_t_max = Rational(1, 4);
  r = iterate(spec, o);
  EXPECT_EQ(r.stop_reason, StopReason::ToleranceMet);
  EXPECT_LE(*r.steps.back().diff_norm, 1e-3);
  EXPECT_EQ(to_string(StopReason::MaxIterations), "max-iters");
}

TEST(Picard, IterateValidatesOptions) {
  ProblemSpec spec = make(example2());
  IterationOptions o;
  o.max_iters = 0;
  EXPECT_THROW(iterate(spec, o), std::invalid_argument);
  o.max_iters = 1;
  o.order = -1;
  EXPECT_THROW(iterate(spec, o), std::invalid_argument);
}

TEST(Picard, ForceRunsWithoutBounds) {
  ProblemSpec spec = make(def(1, 1, 0, "1/(1 + u)", {"x"}, {Interval(-1, 1)}, {Rational(0)}));
  EXPECT_THROW(iterate(spec, IterationOptions{}), DomainError);
  IterationOptions o;
  o.force = true;
  o.order = 3;
  o.max_iters = 2;
  o.grid_t_max = Rational(1, 10);
  o.grid_x = 1;  // x = 0 keeps 1 + u away from zero
  IterationReport r = iterate(spec, o);
  EXPECT_FALSE(r.bounds);
  EXPECT_FALSE(r.bounds_failure.empty());
  EXPECT_FALSE(r.steps[1].bound);
  EXPECT_FALSE(r.contraction_ok);
}

TEST(Picard, ContractionAndBoundsOnExample2) {
  ProblemSpec spec = make(example2());
  IterationReport r = iterate(spec, IterationOptions{});
  ASSERT_TRUE(r.bounds);
  EXPECT_TRUE(r.contraction_ok);
  EXPECT_TRUE(r.initial_conditions_ok);
  EXPECT_EQ(r.grid_t_half_width, Rational(3, 80));
  EXPECT_EQ(*r.steps[2].bound, Rational(1, 2));
}

TEST(Picard, CompareToReference) {
  ProblemSpec spec = make(example2());
  IterationReport r = iterate(spec, IterationOptions{});
  Expr ref = parse_for_problem(spec, "1 + t", ExprRole::Reference);
  auto rows = compare_to_reference(r, spec, ref, r.grid);
  ASSERT_EQ(rows.size(), r.steps.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_FALSE(rows[i].violated);
    // independent: direct series-minus-reference evaluation
    double worst = 0;
    for (const auto& p : r.grid.points) worst = std::max(worst, std::fabs(to_double(Rational(evaluate(r.steps[i].u, p) - 1 - p[0]))));
    EXPECT_NEAR(rows[i].emp_error, worst, 1e-12 * worst + 1e-15);
    if (i > 0) EXPECT_LE(rows[i].emp_error, rows[i - 1].emp_error);
  }
}

TEST(PicardProperty, OperatorIdentityOnRandomPolynomialProblems) {
  std::mt19937_64 rng(testing::kSeed);
  std::uniform_int_distribution<int> pick_n(1, 3), pick_k(1, 2), pick_m(0, 3);
  for (int trial = 0; trial < 50; ++trial) {
    ProblemDefinition d;
    d.n = pick_n(rng);
    d.k = pick_k(rng);
    d.m = pick_m(rng);
    std::vector<std::string> atoms = testing::coordinate_names(d.k);
    if (d.k == 1) atoms[1] = "x";
    for (const auto& s : enumerate_slots(d.n, d.k, d.m)) atoms.push_back(s.name());
    d.F = testing::random_polynomial_text(rng, atoms, 3, 2);
    std::vector<std::string> xs(atoms.begin() + 1, atoms.begin() + 1 + d.k);
    for (int i = 0; i < d.n; ++i) d.initial.push_back(testing::random_polynomial_text(rng, xs, 2, 2));
    d.omega.assign(static_cast<std::size_t>(d.k), Interval(-1, 1));
    d.x0.assign(static_cast<std::size_t>(d.k), Rational(0));
    ProblemSpec spec = build_problem(d);

    const int order = 8 + std::max(d.n, d.m);
    PicardOperator op(spec, order);
    TruncatedSeries u = op.base();
    TruncatedSeries Tu = op(u);
    EXPECT_TRUE(satisfies_initial_conditions(Tu, spec)) << d.F;

    TruncatedSeries lhs = Tu;
    for (int j = 0; j < d.n; ++j) lhs = diff(lhs, 0);
    for (int s = 0; s < 5; ++s) {
      std::vector<Rational> p;
      for (int j = 0; j <= d.k; ++j) p.push_back(testing::random_rational(rng));
      std::vector<Number> coords(p.begin(), p.end()), slots;
      for (const auto& slot : spec.slots) {
        TruncatedSeries ds = diff_orders(u, slot.t_order, slot.x_orders);
        slots.push_back(evaluate(ds, p));
      }
      Number rhs = eval_scalar(spec.F, Env<Number>{coords, slots});
      EXPECT_EQ(evaluate(lhs, p), std::get<Rational>(rhs)) << d.F << " n=" << d.n << " k=" << d.k << " m=" << d.m;
    }
  }
}

TEST(PicardProperty, CorollaryRouteMatchesStandardRoute) {
  ProblemDefinition d = example2();
  d.split = std::make_pair(std::string("2 - u^3"), std::string("t^3 + 3*t^2 + 3*t"));
  ProblemSpec spec = make(d);
  const int order = 8;
  PicardOperator standard(spec, order, StartRoute::Standard);
  PicardOperator corollary(spec, order, StartRoute::Corollary);
  // same operator: u0 + V F(u) = ū0 + V G(u) for arbitrary u
  std::mt19937_64 rng(testing::kSeed + 5);
  for (int i = 0; i < 20; ++i) {
    TruncatedSeries u = testing::random_series(rng, spec.space(), order);
    EXPECT_EQ(standard(u), corollary(u));
  }
  TruncatedSeries a = standard.base(), b = corollary.base();
  for (int p = 1; p <= 4; ++p) {
    a = standard(a);
    b = corollary(b);
    EXPECT_EQ(a.truncated(p), b.truncated(p)) << p;
  }
}

TEST(Picard, ResidualIsExactForPolynomials) {
  ProblemSpec spec = make(example2());
  Grid g = make_uniform_grid(Rational(1, 24), 5, spec.omega, 1);
  TruncatedSeries exact = TruncatedSeries::constant(spec.space(), 4, 1) + TruncatedSeries::coordinate(spec.space(), 4, 0);
  EXPECT_EQ(residual(exact, spec, g), 0.0);
  EXPECT_THROW(residual(exact, spec, Grid{}), std::invalid_argument);
}

}  // namespace
}  // namespace picard
