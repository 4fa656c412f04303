#include <gtest/gtest.h>

#include <cmath>

#include "picard/errors.hpp"
#include "picard/expr.hpp"
#include "random_expr.hpp"

namespace picard {
namespace {

VariableTable basic_table() {
  VariableTable t;
  t.add_coordinate("t", 0);
  t.add_coordinate("x", 1);
  t.add_slot("u", 0);
  t.add_slot("u_x", 1);
  t.add_parameter("c");
  return t;
}

Expr parse(std::string_view s) { return parse_expression(s, basic_table()); }

Rational exact_value(const Expr& e, std::vector<Rational> coords, std::vector<Rational> slots = {}) {
  std::vector<Number> c(coords.begin(), coords.end()), s(slots.begin(), slots.end());
  Number n = eval_scalar(e, Env<Number>{c, s});
  EXPECT_TRUE(is_exact(n));
  return std::get<Rational>(n);
}

TEST(Expr, ParsesPrecedenceAndAssociativity) {
  EXPECT_EQ(exact_value(parse("1 + 2*3^2"), {0, 0}), Rational(19));
  EXPECT_EQ(exact_value(parse("-2^2"), {0, 0}), Rational(-4));
  EXPECT_EQ(exact_value(parse("8/4/2"), {0, 0}), Rational(1));
  EXPECT_EQ(exact_value(parse("t^2/2"), {Rational(3), 0}), Rational(9, 2));
  EXPECT_EQ(exact_value(parse("3/4*x"), {0, Rational(2)}), Rational(3, 2));
  EXPECT_EQ(exact_value(parse("x^(-1)"), {0, Rational(4)}), Rational(1, 4));
  EXPECT_EQ(exact_value(parse("x^(1/2)"), {0, Rational(9, 4)}), Rational(3, 2));
}

TEST(Expr, PrintsCanonically) {
  EXPECT_EQ(to_string(parse("t^3 + 3*t^2 + 3*t + 2 - u^3")), "t^3 + 3*t^2 + 3*t + 2 - u^3");
  EXPECT_EQ(to_string(parse("x^2 - 1/4*u_x^2")), "x^2 - 1/4*u_x^2");
  EXPECT_EQ(to_string(parse("x^(1/2)")), "x^(1/2)");
  EXPECT_EQ(to_string(parse("(t + x)*(t - x)")), "(t + x)*(t - x)");
  EXPECT_EQ(to_string(parse("t/(x*u)")), "t/(x*u)");
  EXPECT_EQ(to_string(parse("sech(c + x)")), "sech(c + x)");
  EXPECT_EQ(to_string(parse("0*t + 1*x")), "x");
}

TEST(Expr, ParseErrorsCarryPositions) {
  auto position_of = [](std::string_view s) -> std::size_t {
    try {
      parse(s);
    } catch (const ParseError& e) {
      return e.position();
    }
    ADD_FAILURE() << "no error for " << s;
    return 0;
  };
  EXPECT_EQ(position_of("1 + * 2"), 4u);
  EXPECT_EQ(position_of("t + y"), 4u);
  EXPECT_EQ(position_of("(t + 1"), 6u);
  EXPECT_EQ(position_of("t $ 1"), 2u);
  EXPECT_EQ(position_of("t^x"), 2u);
  EXPECT_EQ(position_of("foo(t)"), 0u);
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("t 1"), ParseError);
  EXPECT_THROW(parse("2^3^2"), ParseError);
}

TEST(Expr, SmartConstructorsFold) {
  Expr t = Expr::variable(VarRef::coordinate(0), "t");
  EXPECT_TRUE((Expr::constant(2) * Expr::constant(3)).is_constant(Rational(6)));
  EXPECT_TRUE((t * Expr::constant(0)).is_zero());
  EXPECT_EQ(to_string(t + Expr::constant(0)), "t");
  EXPECT_EQ(to_string(Expr::constant(1) * t), "t");
  EXPECT_EQ(make_power(t, 1).kind(), Expr::Kind::Variable);
  EXPECT_TRUE(make_power(t, 0).is_constant(Rational(1)));
  EXPECT_EQ((t + (t + t)).children().size(), 3u);
}

TEST(Expr, BindsParameters) {
  Expr e = parse("c*x");
  EXPECT_THROW(bind_parameters(e, {}), ProblemError);
  Expr b = bind_parameters(e, {{"c", Rational(3)}});
  EXPECT_EQ(to_string(b), "3*x");
}

TEST(Expr, DependencyQueries) {
  Expr e = parse("t*u_x + x^2");
  EXPECT_TRUE(depends_on(e, VarRef::slot(1)));
  EXPECT_FALSE(depends_on(e, VarRef::slot(0)));
  EXPECT_EQ(referenced_slots(e), std::vector<int>{1});
  EXPECT_EQ(referenced_coordinates(e), (std::vector<int>{0, 1}));
}

TEST(Expr, SymbolicDerivatives) {
  EXPECT_EQ(to_string(differentiate(parse("u^3"), VarRef::slot(0))), "3*u^2");
  EXPECT_EQ(to_string(differentiate(parse("x^2 - 1/4*u_x^2"), VarRef::slot(1))), "-1/2*u_x");
  EXPECT_TRUE(differentiate(parse("x^2"), VarRef::slot(0)).is_zero());
}

TEST(Expr, ScalarDomainErrors) {
  EXPECT_THROW(eval_scalar(parse("1/t"), Env<Number>{std::vector<Number>{Rational(0), Rational(0)}, {}}), DomainError);
  EXPECT_THROW(eval_scalar(parse("log(t)"), Env<Number>{std::vector<Number>{Rational(-1), Rational(0)}, {}}),
               DomainError);
  EXPECT_THROW(eval_scalar(parse("sqrt(t)"), Env<Number>{std::vector<Number>{Rational(-1), Rational(0)}, {}}),
               DomainError);
  Number zero = eval_scalar(parse("sqrt(t)"), Env<Number>{std::vector<Number>{Rational(0), Rational(0)}, {}});
  EXPECT_EQ(to_double(zero), 0.0);
}

TEST(Expr, IntervalEvaluationUsesEvenPowerRule) {
  std::vector<Interval> coords{Interval(0), Interval(-1, 1)};
  std::vector<Interval> slots{Interval(0), Interval(-1, 1)};
  Interval r = eval_interval(parse("x^2 - 1/4*u_x^2"), Env<Interval>{coords, slots});
  EXPECT_EQ(r, Interval(Rational(-1, 4), Rational(1)));
}

TEST(Expr, SeriesOfElementaryFunctions) {
  SeriesSpace space = SeriesSpace::at_origin(1);
  auto coords = coordinate_series(space, 9);
  // tan t: tangent numbers 1, 2, 16, 272 over (2j+1)!, i.e. 1, 1/3, 2/15, 17/315.
  TruncatedSeries tan_t = eval_series(parse("tan(t)"), Env<TruncatedSeries>{coords, {}}, 9);
  EXPECT_EQ(tan_t.coefficient({1, 0}), Rational(1));
  EXPECT_EQ(tan_t.coefficient({3, 0}), Rational(1, 3));
  EXPECT_EQ(tan_t.coefficient({5, 0}), Rational(2, 15));
  EXPECT_EQ(tan_t.coefficient({7, 0}), Rational(17, 315));
  // tanh t alternates the same magnitudes.
  TruncatedSeries tanh_t = eval_series(parse("tanh(t)"), Env<TruncatedSeries>{coords, {}}, 9);
  EXPECT_EQ(tanh_t.coefficient({7, 0}), Rational(-17, 315));
  // sech x: Euler numbers 1, -1, 5, -61 divided by (2j)!.
  TruncatedSeries sech_x = eval_series(parse("sech(x)"), Env<TruncatedSeries>{coords, {}}, 9);
  EXPECT_EQ(sech_x.coefficient({0, 2}), Rational(-1, 2));
  EXPECT_EQ(sech_x.coefficient({0, 4}), Rational(5, 24));
  EXPECT_EQ(sech_x.coefficient({0, 6}), Rational(-61, 720));
  TruncatedSeries e = eval_series(parse("exp(t)"), Env<TruncatedSeries>{coords, {}}, 9);
  for (int j = 0; j <= 9; ++j) EXPECT_EQ(e.coefficient({j, 0}), 1 / factorial(static_cast<unsigned>(j)));
}

TEST(Expr, SeriesDomainErrors) {
  SeriesSpace space = SeriesSpace::at_origin(1);
  auto coords = coordinate_series(space, 4);
  EXPECT_THROW(eval_series(parse("1/t"), Env<TruncatedSeries>{coords, {}}, 4), DomainError);
  EXPECT_THROW(eval_series(parse("log(t)"), Env<TruncatedSeries>{coords, {}}, 4), DomainError);
  EXPECT_THROW(eval_series(parse("sqrt(t)"), Env<TruncatedSeries>{coords, {}}, 4), DomainError);
}

std::vector<Rational> random_point(std::mt19937_64& rng) {
  std::vector<Rational> p;
  for (int i = 0; i < 4; ++i) p.push_back(testing::random_in(rng, Rational(-1), Rational(1)));
  return p;
}

double value_at(const Expr& e, const std::vector<double>& p) {
  std::vector<Number> c{p[0], p[1]}, s{p[2], p[3]};
  return to_double(eval_scalar(e, Env<Number>{c, s}));
}

TEST(ExprProperty, PrintParseRoundTrip) {
  testing::ExprGenerator gen(testing::kSeed);
  VariableTable table = gen.table();
  for (int i = 0; i < 300; ++i) {
    Expr e = gen(4);
    std::string text = to_string(e);
    Expr back = parse_expression(text, table);
    EXPECT_EQ(to_string(back), text);
    std::vector<Rational> p = random_point(gen.rng());
    std::vector<double> d(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) d[j] = to_double(p[j]);
    EXPECT_NEAR(value_at(back, d), value_at(e, d), 1e-12 * (1 + std::fabs(value_at(e, d))));
  }
}

TEST(ExprProperty, ScalarValueLiesInIntervalEnclosure) {
  testing::ExprGenerator gen(testing::kSeed + 1);
  for (int i = 0; i < 300; ++i) {
    Expr e = gen(4);
    std::vector<Interval> box;
    for (int j = 0; j < 4; ++j) {
      Rational a = testing::random_in(gen.rng(), Rational(-1), Rational(1));
      Rational b = testing::random_in(gen.rng(), Rational(-1), Rational(1));
      box.emplace_back(std::min(a, b), std::max(a, b));
    }
    Interval r = eval_interval(e, Env<Interval>{std::span(box).subspan(0, 2), std::span(box).subspan(2, 2)});
    for (int k = 0; k < 10; ++k) {
      std::vector<Number> c, s;
      for (int j = 0; j < 4; ++j) (j < 2 ? c : s).push_back(testing::random_in(gen.rng(), box[j].lo, box[j].hi));
      Number v = eval_scalar(e, Env<Number>{c, s});
      if (is_exact(v))
        EXPECT_TRUE(r.contains(std::get<Rational>(v))) << to_string(e);
      else
        EXPECT_TRUE(r.contains(std::get<double>(v))) << to_string(e);
    }
  }
}

TEST(ExprProperty, DerivativeMatchesCentralDifferences) {
  testing::ExprGenerator gen(testing::kSeed + 2);
  const double h = 1e-6;
  for (int i = 0; i < 300; ++i) {
    Expr e = gen(3);
    const int which = i % 4;
    VarRef v = which < 2 ? VarRef::coordinate(which) : VarRef::slot(which - 2);
    Expr de = differentiate(e, v);
    std::vector<Rational> p = random_point(gen.rng());
    std::vector<double> d(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) d[j] = to_double(p[j]);
    auto plus = d, minus = d;
    plus[static_cast<std::size_t>(which)] += h;
    minus[static_cast<std::size_t>(which)] -= h;
    double fd = (value_at(e, plus) - value_at(e, minus)) / (2 * h);
    double exact = value_at(de, d);
    EXPECT_NEAR(exact, fd, 1e-6 * (1 + std::fabs(exact))) << to_string(e) << " d/" << which;
  }
}

TEST(ExprProperty, SeriesAgreesWithPointEvaluationForPolynomials) {
  std::mt19937_64 rng(testing::kSeed + 3);
  VariableTable table;
  table.add_coordinate("t", 0);
  table.add_coordinate("x", 1);
  SeriesSpace space(1, {Rational(1, 2)});
  for (int i = 0; i < 100; ++i) {
    std::string text = testing::random_polynomial_text(rng, {"t", "x", "(t - x)"}, 4, 3);
    Expr e = parse_expression(text, table);
    auto coords = coordinate_series(space, 6);
    TruncatedSeries s = eval_series(e, Env<TruncatedSeries>{coords, {}}, 6);
    std::vector<Rational> p{testing::random_rational(rng), testing::random_rational(rng)};
    std::vector<Number> c(p.begin(), p.end());
    EXPECT_EQ(evaluate(s, p), std::get<Rational>(eval_scalar(e, Env<Number>{c, {}}))) << text;
  }
}

}  // namespace
}  // namespace picard
