#pragma once

#include <random>

#include "picard/expr.hpp"
#include "test_support.hpp"

namespace picard::testing {

/// Smooth random expressions over coordinates t, x and slots y0, y1; every
/// quotient has a denominator bounded away from zero.
class ExprGenerator {
 public:
  explicit ExprGenerator(std::uint64_t seed) : rng_(seed) {}

  VariableTable table() const {
    VariableTable t;
    t.add_coordinate("t", 0);
    t.add_coordinate("x", 1);
    t.add_slot("y0", 0);
    t.add_slot("y1", 1);
    return t;
  }

  Expr leaf() {
    switch (pick(5)) {
      case 0: return Expr::constant(random_rational(rng_, 5, 4));
      case 1: return Expr::variable(VarRef::coordinate(0), "t");
      case 2: return Expr::variable(VarRef::coordinate(1), "x");
      case 3: return Expr::variable(VarRef::slot(0), "y0");
      default: return Expr::variable(VarRef::slot(1), "y1");
    }
  }

  Expr operator()(int depth) {
    if (depth == 0) return leaf();
    switch (pick(8)) {
      case 0: return (*this)(depth - 1) + (*this)(depth - 1);
      case 1: return (*this)(depth - 1) - (*this)(depth - 1);
      case 2: return (*this)(depth - 1) * (*this)(depth - 1);
      case 3: return make_power((*this)(depth - 1), Rational(pick(3) + 2));
      case 4: {
        Expr d = (*this)(depth - 1);
        return (*this)(depth - 1) / (Expr::constant(2) + make_power(d, 2));
      }
      case 5: {
        static const ElementaryFunction safe[] = {ElementaryFunction::Exp, ElementaryFunction::Sin, ElementaryFunction::Cos,
                                                  ElementaryFunction::Tanh, ElementaryFunction::Sech};
        return Expr::function(safe[pick(5)], (*this)(depth - 1) * Expr::constant(Rational(1, 2)));
      }
      case 6: return -(*this)(depth - 1);
      default: return leaf();
    }
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::mt19937_64 rng_;
};

}  // namespace picard::testing
