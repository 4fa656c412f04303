#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "picard/elementary.hpp"
#include "picard/interval.hpp"
#include "picard/rational.hpp"
#include "picard/series.hpp"

namespace picard {

/// A free variable: a coordinate (0 = t, i = x_i) or an argument slot y_i of F.
struct VarRef {
  enum class Kind { Coordinate, Slot };
  Kind kind = Kind::Coordinate;
  int index = 0;

  static VarRef coordinate(int i) { return {Kind::Coordinate, i}; }
  static VarRef slot(int i) { return {Kind::Slot, i}; }
  friend bool operator==(const VarRef&, const VarRef&) = default;
};

enum class NamedConstant { Pi };

/// Immutable expression tree. Copies share structure.
class Expr {
 public:
  enum class Kind { Constant, Named, Parameter, Variable, Sum, Product, Power, Negate, Quotient, Function };

  Expr();  // constant 0

  static Expr constant(const Rational& value);
  static Expr named(NamedConstant c);
  static Expr parameter(std::string name);
  /// `name` is only used for printing.
  static Expr variable(VarRef ref, std::string name);
  static Expr function(ElementaryFunction f, Expr argument);

  Kind kind() const;
  const Rational& value() const;        // Constant
  NamedConstant named_constant() const;  // Named
  const std::string& name() const;       // Parameter, Variable
  VarRef var() const;                    // Variable
  const Rational& exponent() const;      // Power
  ElementaryFunction func() const;       // Function
  std::span<const Expr> children() const;

  bool is_constant(const Rational& v) const { return kind() == Kind::Constant && value() == v; }
  bool is_zero() const { return is_constant(Rational(0)); }

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  friend struct ExprFactory;

  std::shared_ptr<const Node> node_;
};

// Smart constructors; they only fold neutral elements and numeric constants.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr make_sum(std::vector<Expr> terms);
Expr make_product(std::vector<Expr> factors);
Expr make_power(const Expr& base, const Rational& exponent);

/// Name resolution for the parser.
class VariableTable {
 public:
  using Resolver = std::function<std::optional<Expr>(std::string_view)>;

  void add_coordinate(const std::string& name, int index);
  void add_slot(const std::string& name, int index);
  void add_parameter(const std::string& name);
  /// Fallback consulted for names not registered explicitly. It may throw to
  /// reject a recognised but invalid name (e.g. a derivative of too high order).
  void set_resolver(Resolver resolver) { resolver_ = std::move(resolver); }

  std::optional<Expr> resolve(std::string_view name) const;

 private:
  std::map<std::string, Expr, std::less<>> names_;
  Resolver resolver_;
};

/// Parses the expression grammar; throws ParseError on syntax errors and
/// unknown identifiers.
Expr parse_expression(std::string_view text, const VariableTable& table);

/// Canonical text form; parse(to_string(e)) prints back identically.
std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

Expr differentiate(const Expr& e, VarRef v);

/// Replaces parameter nodes by their values; throws ProblemError for unbound names.
Expr bind_parameters(const Expr& e, const std::map<std::string, Rational>& values);

/// True when e references v.
bool depends_on(const Expr& e, VarRef v);
/// All slot indices referenced by e, ascending.
std::vector<int> referenced_slots(const Expr& e);
/// All coordinate indices referenced by e, ascending.
std::vector<int> referenced_coordinates(const Expr& e);

/// Exact when every step stays rational, float otherwise.
using Number = std::variant<Rational, double>;

double to_double(const Number& n);
bool is_exact(const Number& n);

template <class T>
struct Env {
  std::span<const T> coordinates;
  std::span<const T> slots;
};

/// Throws DomainError on division by zero, log of non-positive values and
/// square roots of negative values.
Number eval_scalar(const Expr& e, const Env<Number>& env);

/// Enclosure of the range of e over the box.
Interval eval_interval(const Expr& e, const Env<Interval>& box, double margin = kDefaultOutwardMargin);

/// Taylor expansion of e composed with the given series, truncated at
/// `order` (or lower when an input series has a lower order).
TruncatedSeries eval_series(const Expr& e, const Env<TruncatedSeries>& env, int order, ExpansionNotes* notes = nullptr);

/// Coordinate series t, x0_1 + X_1, ... at the given order.
std::vector<TruncatedSeries> coordinate_series(const SeriesSpace& space, int order);

}  // namespace picard
