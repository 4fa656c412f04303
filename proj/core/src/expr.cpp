#include "picard/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>
#include <stdexcept>

#include "picard/errors.hpp"

namespace picard {

struct Expr::Node {
  Kind kind = Kind::Constant;
  Rational value;
  NamedConstant named = NamedConstant::Pi;
  std::string name;
  VarRef var;
  Rational exponent;
  ElementaryFunction func = ElementaryFunction::Exp;
  std::vector<Expr> children;
};

struct ExprFactory {
  static Expr make(Expr::Node node) { return Expr(std::make_shared<const Expr::Node>(std::move(node))); }
};

namespace {

Expr make_node(Expr::Kind kind, std::vector<Expr> children) {
  Expr::Node n;
  n.kind = kind;
  n.children = std::move(children);
  return ExprFactory::make(std::move(n));
}

}  // namespace

Expr::Expr() : Expr(constant(Rational(0))) {}

Expr Expr::constant(const Rational& value) {
  Node n;
  n.kind = Kind::Constant;
  n.value = value;
  n.value.canonicalize();
  return ExprFactory::make(std::move(n));
}

Expr Expr::named(NamedConstant c) {
  Node n;
  n.kind = Kind::Named;
  n.named = c;
  n.name = "pi";
  return ExprFactory::make(std::move(n));
}

Expr Expr::parameter(std::string name) {
  Node n;
  n.kind = Kind::Parameter;
  n.name = std::move(name);
  return ExprFactory::make(std::move(n));
}

Expr Expr::variable(VarRef ref, std::string name) {
  Node n;
  n.kind = Kind::Variable;
  n.var = ref;
  n.name = std::move(name);
  return ExprFactory::make(std::move(n));
}

Expr Expr::function(ElementaryFunction f, Expr argument) {
  Node n;
  n.kind = Kind::Function;
  n.func = f;
  n.children.push_back(std::move(argument));
  return ExprFactory::make(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
NamedConstant Expr::named_constant() const { return node_->named; }
const std::string& Expr::name() const { return node_->name; }
VarRef Expr::var() const { return node_->var; }
const Rational& Expr::exponent() const { return node_->exponent; }
ElementaryFunction Expr::func() const { return node_->func; }
std::span<const Expr> Expr::children() const { return node_->children; }

// ---------------------------------------------------------------------------
// Smart constructors

Expr make_sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  for (auto& t : terms) {
    if (t.kind() == Expr::Kind::Sum) {
      for (const auto& c : t.children()) flat.push_back(c);
    } else if (!t.is_zero()) {
      flat.push_back(std::move(t));
    }
  }
  if (flat.empty()) return Expr::constant(Rational(0));
  if (flat.size() == 1) return flat.front();
  if (std::all_of(flat.begin(), flat.end(), [](const Expr& e) { return e.kind() == Expr::Kind::Constant; })) {
    Rational s(0);
    for (const auto& e : flat) s += e.value();
    return Expr::constant(s);
  }
  return make_node(Expr::Kind::Sum, std::move(flat));
}

Expr make_product(std::vector<Expr> factors) {
  Rational coefficient(1);
  std::vector<Expr> rest;
  auto absorb = [&](const Expr& f) {
    if (f.kind() == Expr::Kind::Constant)
      coefficient *= f.value();
    else
      rest.push_back(f);
  };
  for (const auto& f : factors) {
    if (f.kind() == Expr::Kind::Product) {
      for (const auto& c : f.children()) absorb(c);
    } else {
      absorb(f);
    }
  }
  if (coefficient == 0 || rest.empty()) return Expr::constant(coefficient);
  if (coefficient == -1) {
    Expr inner = rest.size() == 1 ? rest.front() : make_node(Expr::Kind::Product, std::move(rest));
    return -inner;
  }
  if (coefficient != 1) rest.insert(rest.begin(), Expr::constant(coefficient));
  if (rest.size() == 1) return rest.front();
  return make_node(Expr::Kind::Product, std::move(rest));
}

Expr make_power(const Expr& base, const Rational& exponent) {
  if (exponent == 0) return Expr::constant(Rational(1));
  if (exponent == 1) return base;
  if (base.kind() == Expr::Kind::Constant && exponent.get_den() == 1 && (base.value() != 0 || exponent > 0))
    return Expr::constant(pow(base.value(), static_cast<int>(exponent.get_num().get_si())));
  Expr::Node n;
  n.kind = Expr::Kind::Power;
  n.exponent = exponent;
  n.children.push_back(base);
  return ExprFactory::make(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) { return make_sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return make_sum({a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return make_product({a, b}); }

Expr operator-(const Expr& a) {
  if (a.kind() == Expr::Kind::Constant) return Expr::constant(-a.value());
  if (a.kind() == Expr::Kind::Negate) return a.children()[0];
  if (a.kind() == Expr::Kind::Product && a.children()[0].kind() == Expr::Kind::Constant) {
    std::vector<Expr> factors(a.children().begin(), a.children().end());
    factors[0] = Expr::constant(-factors[0].value());
    return make_product(std::move(factors));
  }
  return make_node(Expr::Kind::Negate, {a});
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_constant(Rational(1))) return a;
  if (b.kind() == Expr::Kind::Constant && b.value() != 0) {
    if (a.kind() == Expr::Kind::Constant) return Expr::constant(a.value() / b.value());
  }
  if (a.is_zero() && b.kind() == Expr::Kind::Constant && b.value() != 0) return a;
  return make_node(Expr::Kind::Quotient, {a, b});
}

// ---------------------------------------------------------------------------
// Variable table

void VariableTable::add_coordinate(const std::string& name, int index) {
  names_.insert_or_assign(name, Expr::variable(VarRef::coordinate(index), name));
}

void VariableTable::add_slot(const std::string& name, int index) {
  names_.insert_or_assign(name, Expr::variable(VarRef::slot(index), name));
}

void VariableTable::add_parameter(const std::string& name) { names_.insert_or_assign(name, Expr::parameter(name)); }

std::optional<Expr> VariableTable::resolve(std::string_view name) const {
  if (auto it = names_.find(name); it != names_.end()) return it->second;
  if (resolver_) return resolver_(name);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class TokenKind { Number, Ident, Op, LParen, RParen, End };

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto digit = [&](std::size_t j) { return j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])); };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (digit(i) || (c == '.' && digit(i + 1))) {
      while (digit(i)) ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        while (digit(i)) ++i;
      } else if (i < s.size() && s[i] == '/' && digit(i + 1) &&
                 !(!out.empty() && out.back().kind == TokenKind::Op && out.back().text == "^")) {
        // "3/4" is one literal, but "x^2/3" divides x^2 by 3.
        ++i;
        while (digit(i)) ++i;
      }
      out.push_back({TokenKind::Number, std::string(s.substr(start, i - start)), start});
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      while (i < s.size()) {
        char d = s[i];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
          ++i;
        } else if (d == '{' && s[i - 1] == '_') {
          auto close = s.find('}', i);
          if (close == std::string_view::npos) throw ParseError("unterminated '{' in identifier", i);
          i = close + 1;
        } else {
          break;
        }
      }
      out.push_back({TokenKind::Ident, std::string(s.substr(start, i - start)), start});
    } else if (c == '(') {
      out.push_back({TokenKind::LParen, "(", i++});
    } else if (c == ')') {
      out.push_back({TokenKind::RParen, ")", i++});
    } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
      out.push_back({TokenKind::Op, std::string(1, c), i++});
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
  }
  out.push_back({TokenKind::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const VariableTable& table) : tokens_(tokenize(text)), table_(table) {}

  Expr parse() {
    Expr e = expr();
    if (peek().kind != TokenKind::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }
  bool accept_op(char op) {
    if (peek().kind == TokenKind::Op && peek().text[0] == op) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(TokenKind kind, const char* what) {
    if (peek().kind != kind) throw ParseError(std::string("expected ") + what, peek().pos);
    ++pos_;
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept_op('+'))
        terms.push_back(term());
      else if (accept_op('-'))
        terms.push_back(-term());
      else
        break;
    }
    return terms.size() == 1 ? terms.front() : make_sum(std::move(terms));
  }

  Expr term() {
    Expr acc = factor();
    for (;;) {
      if (accept_op('*'))
        acc = acc * factor();
      else if (accept_op('/'))
        acc = acc / factor();
      else
        break;
    }
    return acc;
  }

  Expr factor() {
    if (accept_op('-')) return -factor();
    Expr b = base();
    if (accept_op('^')) return make_power(b, exponent());
    return b;
  }

  Rational exponent() {
    const bool parens = peek().kind == TokenKind::LParen;
    if (parens) ++pos_;
    const bool negative = accept_op('-');
    if (peek().kind != TokenKind::Number) throw ParseError("exponent must be a rational literal", peek().pos);
    Rational r = parse_rational(next().text);
    if (parens) expect(TokenKind::RParen, "')' after exponent");
    return negative ? Rational(-r) : r;
  }

  Expr base() {
    const Token& tok = peek();
    switch (tok.kind) {
      case TokenKind::Number:
        ++pos_;
        return Expr::constant(parse_rational(tok.text));
      case TokenKind::LParen: {
        ++pos_;
        Expr e = expr();
        expect(TokenKind::RParen, "')'");
        return e;
      }
      case TokenKind::Ident: {
        ++pos_;
        if (auto f = function_from_name(tok.text)) {
          expect(TokenKind::LParen, "'(' after function name");
          Expr arg = expr();
          expect(TokenKind::RParen, "')'");
          return Expr::function(*f, arg);
        }
        if (tok.text == "pi") return Expr::named(NamedConstant::Pi);
        std::optional<Expr> resolved;
        try {
          resolved = table_.resolve(tok.text);
        } catch (const ParseError&) {
          throw;
        } catch (const std::exception& err) {
          throw ParseError(err.what(), tok.pos);
        }
        if (!resolved) throw ParseError("unknown identifier '" + tok.text + "'", tok.pos);
        return *resolved;
      }
      case TokenKind::End:
        throw ParseError("unexpected end of expression", tok.pos);
      default:
        throw ParseError("unexpected '" + tok.text + "'", tok.pos);
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const VariableTable& table_;
};

}  // namespace

Expr parse_expression(std::string_view text, const VariableTable& table) { return Parser(text, table).parse(); }

// ---------------------------------------------------------------------------
// Printer

namespace {

int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Sum:
      return 1;
    case Expr::Kind::Product:
    case Expr::Kind::Quotient:
      return 2;
    case Expr::Kind::Negate:
      return 3;
    case Expr::Kind::Constant:
      return e.value() < 0 ? 3 : 5;
    case Expr::Kind::Power:
      return 4;
    default:
      return 5;
  }
}

std::string print(const Expr& e, int min_prec);

std::string raw(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return to_string(e.value());
    case Expr::Kind::Named:
    case Expr::Kind::Parameter:
    case Expr::Kind::Variable:
      return e.name();
    case Expr::Kind::Sum: {
      auto ch = e.children();
      std::string s = print(ch[0], 1);
      for (std::size_t i = 1; i < ch.size(); ++i) {
        const Expr& c = ch[i];
        if (c.kind() == Expr::Kind::Negate)
          s += " - " + print(c.children()[0], 2);
        else if (c.kind() == Expr::Kind::Constant && c.value() < 0)
          s += " - " + to_string(abs(c.value()));
        else if (c.kind() == Expr::Kind::Product && c.children()[0].kind() == Expr::Kind::Constant &&
                 c.children()[0].value() < 0)
          s += " - " + print(-c, 2);
        else
          s += " + " + print(c, 2);
      }
      return s;
    }
    case Expr::Kind::Product: {
      auto ch = e.children();
      std::string s = print(ch[0], 2);
      for (std::size_t i = 1; i < ch.size(); ++i) s += "*" + print(ch[i], 3);
      return s;
    }
    case Expr::Kind::Quotient:
      return print(e.children()[0], 2) + "/" + print(e.children()[1], 3);
    case Expr::Kind::Negate:
      return "-" + print(e.children()[0], 3);
    case Expr::Kind::Power: {
      const Rational& r = e.exponent();
      std::string exp = (r >= 0 && r.get_den() == 1) ? to_string(r) : "(" + to_string(r) + ")";
      return print(e.children()[0], 5) + "^" + exp;
    }
    case Expr::Kind::Function:
      return std::string(function_name(e.func())) + "(" + print(e.children()[0], 0) + ")";
  }
  return "?";
}

std::string print(const Expr& e, int min_prec) {
  std::string s = raw(e);
  return precedence(e) < min_prec ? "(" + s + ")" : s;
}

}  // namespace

std::string to_string(const Expr& e) { return print(e, 0); }

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

// ---------------------------------------------------------------------------
// Structural queries

namespace {

template <class Visit>
void walk(const Expr& e, Visit&& visit) {
  visit(e);
  for (const auto& c : e.children()) walk(c, visit);
}

Expr rebuild(const Expr& e, std::vector<Expr> children) {
  switch (e.kind()) {
    case Expr::Kind::Sum:
      return make_sum(std::move(children));
    case Expr::Kind::Product:
      return make_product(std::move(children));
    case Expr::Kind::Negate:
      return -children[0];
    case Expr::Kind::Quotient:
      return children[0] / children[1];
    case Expr::Kind::Power:
      return make_power(children[0], e.exponent());
    case Expr::Kind::Function:
      return Expr::function(e.func(), children[0]);
    default:
      return e;
  }
}

}  // namespace

bool depends_on(const Expr& e, VarRef v) {
  bool found = false;
  walk(e, [&](const Expr& n) {
    if (n.kind() == Expr::Kind::Variable && n.var() == v) found = true;
  });
  return found;
}

std::vector<int> referenced_slots(const Expr& e) {
  std::set<int> s;
  walk(e, [&](const Expr& n) {
    if (n.kind() == Expr::Kind::Variable && n.var().kind == VarRef::Kind::Slot) s.insert(n.var().index);
  });
  return {s.begin(), s.end()};
}

std::vector<int> referenced_coordinates(const Expr& e) {
  std::set<int> s;
  walk(e, [&](const Expr& n) {
    if (n.kind() == Expr::Kind::Variable && n.var().kind == VarRef::Kind::Coordinate) s.insert(n.var().index);
  });
  return {s.begin(), s.end()};
}

Expr bind_parameters(const Expr& e, const std::map<std::string, Rational>& values) {
  if (e.kind() == Expr::Kind::Parameter) {
    auto it = values.find(e.name());
    if (it == values.end()) throw ProblemError("parameter '" + e.name() + "' has no value");
    return Expr::constant(it->second);
  }
  if (e.children().empty()) return e;
  std::vector<Expr> ch;
  for (const auto& c : e.children()) ch.push_back(bind_parameters(c, values));
  return rebuild(e, std::move(ch));
}

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e, VarRef v) {
  const Expr zero = Expr::constant(Rational(0));
  const Expr one = Expr::constant(Rational(1));
  switch (e.kind()) {
    case Expr::Kind::Constant:
    case Expr::Kind::Named:
    case Expr::Kind::Parameter:
      return zero;
    case Expr::Kind::Variable:
      return e.var() == v ? one : zero;
    case Expr::Kind::Sum: {
      std::vector<Expr> terms;
      for (const auto& c : e.children()) terms.push_back(differentiate(c, v));
      return make_sum(std::move(terms));
    }
    case Expr::Kind::Product: {
      auto ch = e.children();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < ch.size(); ++i) {
        Expr d = differentiate(ch[i], v);
        if (d.is_zero()) continue;
        std::vector<Expr> factors(ch.begin(), ch.end());
        factors[i] = d;
        terms.push_back(make_product(std::move(factors)));
      }
      return make_sum(std::move(terms));
    }
    case Expr::Kind::Negate:
      return -differentiate(e.children()[0], v);
    case Expr::Kind::Quotient: {
      const Expr& a = e.children()[0];
      const Expr& b = e.children()[1];
      Expr da = differentiate(a, v);
      Expr db = differentiate(b, v);
      Expr first = da.is_zero() ? zero : da / b;
      Expr second = db.is_zero() ? zero : (a * db) / make_power(b, Rational(2));
      return first - second;
    }
    case Expr::Kind::Power: {
      const Expr& b = e.children()[0];
      Expr db = differentiate(b, v);
      if (db.is_zero()) return zero;
      const Rational& r = e.exponent();
      return make_product({Expr::constant(r), make_power(b, r - 1), db});
    }
    case Expr::Kind::Function: {
      const Expr& a = e.children()[0];
      Expr da = differentiate(a, v);
      if (da.is_zero()) return zero;
      Expr outer;
      switch (e.func()) {
        case ElementaryFunction::Exp:
          outer = e;
          break;
        case ElementaryFunction::Log:
          return da / a;
        case ElementaryFunction::Sin:
          outer = Expr::function(ElementaryFunction::Cos, a);
          break;
        case ElementaryFunction::Cos:
          outer = -Expr::function(ElementaryFunction::Sin, a);
          break;
        case ElementaryFunction::Tan:
          outer = one + make_power(e, Rational(2));
          break;
        case ElementaryFunction::Tanh:
          outer = one - make_power(e, Rational(2));
          break;
        case ElementaryFunction::Sech:
          outer = -(e * Expr::function(ElementaryFunction::Tanh, a));
          break;
        case ElementaryFunction::Sqrt:
          return da / (Expr::constant(Rational(2)) * e);
      }
      return outer * da;
    }
  }
  throw std::logic_error("unknown expression kind");
}

// ---------------------------------------------------------------------------
// Scalar evaluation

double to_double(const Number& n) {
  return std::holds_alternative<Rational>(n) ? to_double(std::get<Rational>(n)) : std::get<double>(n);
}

bool is_exact(const Number& n) { return std::holds_alternative<Rational>(n); }

namespace {

template <class Op>
Number combine(const Number& a, const Number& b, Op op) {
  if (is_exact(a) && is_exact(b)) return Number(op(std::get<Rational>(a), std::get<Rational>(b)));
  return Number(op(to_double(a), to_double(b)));
}

bool is_zero(const Number& n) { return is_exact(n) ? std::get<Rational>(n) == 0 : std::get<double>(n) == 0.0; }

std::string context(const Expr& e) { return " in '" + to_string(e) + "'"; }

template <class T>
const T& lookup(const Env<T>& env, VarRef v) {
  auto span = v.kind == VarRef::Kind::Coordinate ? env.coordinates : env.slots;
  if (v.index < 0 || static_cast<std::size_t>(v.index) >= span.size())
    throw std::out_of_range("variable index " + std::to_string(v.index) + " not assigned");
  return span[static_cast<std::size_t>(v.index)];
}

double float_function(ElementaryFunction f, double x) {
  switch (f) {
    case ElementaryFunction::Exp:
      return std::exp(x);
    case ElementaryFunction::Log:
      if (x <= 0) throw DomainError("log of non-positive value");
      return std::log(x);
    case ElementaryFunction::Sin:
      return std::sin(x);
    case ElementaryFunction::Cos:
      return std::cos(x);
    case ElementaryFunction::Tan:
      return std::tan(x);
    case ElementaryFunction::Tanh:
      return std::tanh(x);
    case ElementaryFunction::Sech:
      return 1.0 / std::cosh(x);
    case ElementaryFunction::Sqrt:
      if (x < 0) throw DomainError("sqrt of negative value");
      return std::sqrt(x);
  }
  throw std::logic_error("unknown function");
}

}  // namespace

Number eval_scalar(const Expr& e, const Env<Number>& env) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return e.value();
    case Expr::Kind::Named:
      return std::numbers::pi;
    case Expr::Kind::Parameter:
      throw ProblemError("parameter '" + e.name() + "' has no value");
    case Expr::Kind::Variable:
      return lookup(env, e.var());
    case Expr::Kind::Sum: {
      Number acc = Rational(0);
      for (const auto& c : e.children()) acc = combine(acc, eval_scalar(c, env), [](auto x, auto y) { return decltype(x)(x + y); });
      return acc;
    }
    case Expr::Kind::Product: {
      Number acc = Rational(1);
      for (const auto& c : e.children()) acc = combine(acc, eval_scalar(c, env), [](auto x, auto y) { return decltype(x)(x * y); });
      return acc;
    }
    case Expr::Kind::Negate: {
      Number v = eval_scalar(e.children()[0], env);
      if (is_exact(v)) return Rational(-std::get<Rational>(v));
      return -std::get<double>(v);
    }
    case Expr::Kind::Quotient: {
      Number a = eval_scalar(e.children()[0], env);
      Number b = eval_scalar(e.children()[1], env);
      if (is_zero(b)) throw DomainError("division by zero" + context(e));
      return combine(a, b, [](auto x, auto y) { return decltype(x)(x / y); });
    }
    case Expr::Kind::Power: {
      Number b = eval_scalar(e.children()[0], env);
      const Rational& r = e.exponent();
      if (r.get_den() == 1) {
        int n = static_cast<int>(r.get_num().get_si());
        if (n < 0 && is_zero(b)) throw DomainError("division by zero" + context(e));
        if (is_exact(b)) return pow(std::get<Rational>(b), n);
        return std::pow(std::get<double>(b), n);
      }
      double x = to_double(b);
      if (x < 0 || (x == 0 && r < 0)) throw DomainError("fractional power outside its domain" + context(e));
      Rational root;
      if (is_exact(b) && exact_root(std::get<Rational>(b), static_cast<unsigned>(r.get_den().get_ui()), root))
        return pow(root, static_cast<int>(r.get_num().get_si()));
      return std::pow(x, to_double(r));
    }
    case Expr::Kind::Function: {
      Number arg = eval_scalar(e.children()[0], env);
      Rational root;
      if (e.func() == ElementaryFunction::Sqrt && is_exact(arg) && std::get<Rational>(arg) >= 0 &&
          exact_root(std::get<Rational>(arg), 2, root))
        return root;
      double x = to_double(arg);
      try {
        double y = float_function(e.func(), x);
        if (!std::isfinite(y)) throw DomainError("non-finite function value");
        return y;
      } catch (const DomainError& err) {
        throw DomainError(err.what() + context(e));
      }
    }
  }
  throw std::logic_error("unknown expression kind");
}

// ---------------------------------------------------------------------------
// Interval evaluation

Interval eval_interval(const Expr& e, const Env<Interval>& box, double margin) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return Interval(e.value());
    case Expr::Kind::Named:
      return enclose(std::numbers::pi, margin);
    case Expr::Kind::Parameter:
      throw ProblemError("parameter '" + e.name() + "' has no value");
    case Expr::Kind::Variable:
      return lookup(box, e.var());
    case Expr::Kind::Sum: {
      Interval acc(Rational(0));
      for (const auto& c : e.children()) acc = acc + eval_interval(c, box, margin);
      return acc;
    }
    case Expr::Kind::Product: {
      Interval acc(Rational(1));
      for (const auto& c : e.children()) acc = acc * eval_interval(c, box, margin);
      return acc;
    }
    case Expr::Kind::Negate:
      return -eval_interval(e.children()[0], box, margin);
    case Expr::Kind::Quotient: {
      Interval a = eval_interval(e.children()[0], box, margin);
      Interval b = eval_interval(e.children()[1], box, margin);
      try {
        return a / b;
      } catch (const DomainError& err) {
        throw DomainError(err.what() + context(e));
      }
    }
    case Expr::Kind::Power: {
      Interval b = eval_interval(e.children()[0], box, margin);
      try {
        return rational_pow(b, e.exponent(), margin);
      } catch (const DomainError& err) {
        throw DomainError(err.what() + context(e));
      }
    }
    case Expr::Kind::Function: {
      Interval x = eval_interval(e.children()[0], box, margin);
      try {
        switch (e.func()) {
          case ElementaryFunction::Exp:
            return exp(x, margin);
          case ElementaryFunction::Log:
            return log(x, margin);
          case ElementaryFunction::Sin:
            return sin(x, margin);
          case ElementaryFunction::Cos:
            return cos(x, margin);
          case ElementaryFunction::Tan:
            return tan(x, margin);
          case ElementaryFunction::Tanh:
            return tanh(x, margin);
          case ElementaryFunction::Sech:
            return sech(x, margin);
          case ElementaryFunction::Sqrt:
            return sqrt(x, margin);
        }
      } catch (const DomainError& err) {
        throw DomainError(err.what() + context(e));
      }
    }
  }
  throw std::logic_error("unknown expression kind");
}

// ---------------------------------------------------------------------------
// Series evaluation

std::vector<TruncatedSeries> coordinate_series(const SeriesSpace& space, int order) {
  std::vector<TruncatedSeries> out;
  for (int i = 0; i < space.variable_count(); ++i) out.push_back(TruncatedSeries::coordinate(space, order, i));
  return out;
}

namespace {

TruncatedSeries series_rec(const Expr& e, const Env<TruncatedSeries>& env, const SeriesSpace& space, int order,
                           ExpansionNotes* notes) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return TruncatedSeries::constant(space, order, e.value());
    case Expr::Kind::Named:
      if (notes) notes->note("pi replaced by its double approximation");
      return TruncatedSeries::constant(space, order, from_double(std::numbers::pi));
    case Expr::Kind::Parameter:
      throw ProblemError("parameter '" + e.name() + "' has no value");
    case Expr::Kind::Variable: {
      const TruncatedSeries& s = lookup(env, e.var());
      if (!(s.space() == space)) throw std::invalid_argument("series arguments over different spaces");
      return s.order() > order ? s.truncated(order) : s;
    }
    case Expr::Kind::Sum: {
      auto ch = e.children();
      TruncatedSeries acc = series_rec(ch[0], env, space, order, notes);
      for (std::size_t i = 1; i < ch.size(); ++i) acc += series_rec(ch[i], env, space, order, notes);
      return acc;
    }
    case Expr::Kind::Product: {
      auto ch = e.children();
      TruncatedSeries acc = series_rec(ch[0], env, space, order, notes);
      for (std::size_t i = 1; i < ch.size(); ++i) acc = acc * series_rec(ch[i], env, space, order, notes);
      return acc;
    }
    case Expr::Kind::Negate:
      return -series_rec(e.children()[0], env, space, order, notes);
    case Expr::Kind::Quotient: {
      TruncatedSeries a = series_rec(e.children()[0], env, space, order, notes);
      TruncatedSeries b = series_rec(e.children()[1], env, space, order, notes);
      try {
        return a * reciprocal(b);
      } catch (const DomainError& err) {
        throw DomainError(err.what() + context(e));
      }
    }
    case Expr::Kind::Power: {
      TruncatedSeries b = series_rec(e.children()[0], env, space, order, notes);
      try {
        return rational_pow(b, e.exponent(), notes);
      } catch (const DomainError& err) {
        throw DomainError(err.what() + context(e));
      }
    }
    case Expr::Kind::Function: {
      TruncatedSeries a = series_rec(e.children()[0], env, space, order, notes);
      try {
        return apply_function(e.func(), a, notes);
      } catch (const DomainError& err) {
        throw DomainError(err.what() + context(e));
      }
    }
  }
  throw std::logic_error("unknown expression kind");
}

}  // namespace

TruncatedSeries eval_series(const Expr& e, const Env<TruncatedSeries>& env, int order, ExpansionNotes* notes) {
  if (order < 0) throw std::invalid_argument("negative series order");
  const TruncatedSeries* any = !env.coordinates.empty() ? &env.coordinates[0]
                               : !env.slots.empty()     ? &env.slots[0]
                                                        : nullptr;
  if (!any) throw std::invalid_argument("eval_series needs at least one series in the environment");
  return series_rec(e, env, any->space(), order, notes);
}

}  // namespace picard
