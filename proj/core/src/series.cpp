#include "picard/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "picard/errors.hpp"

namespace picard {

int total_degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

bool GradedLex::operator()(const Monomial& a, const Monomial& b) const {
  int da = total_degree(a);
  int db = total_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

SeriesSpace::SeriesSpace(int k, std::vector<Rational> expansion_point) : spatial_dim(k), x0(std::move(expansion_point)) {
  if (k < 1) throw std::invalid_argument("series needs at least one spatial variable");
  if (static_cast<int>(x0.size()) != k) throw std::invalid_argument("expansion point dimension mismatch");
}

SeriesSpace SeriesSpace::at_origin(int k) { return SeriesSpace(k, std::vector<Rational>(static_cast<std::size_t>(k))); }

TruncatedSeries::TruncatedSeries(SeriesSpace space, int order) : space_(std::move(space)), order_(order) {
  if (order < 0) throw std::invalid_argument("negative truncation order");
}

TruncatedSeries TruncatedSeries::constant(const SeriesSpace& space, int order, const Rational& value) {
  TruncatedSeries s(space, order);
  s.add_term(Monomial(static_cast<std::size_t>(space.variable_count()), 0), value);
  return s;
}

TruncatedSeries TruncatedSeries::coordinate(const SeriesSpace& space, int order, int index) {
  if (index < 0 || index >= space.variable_count()) throw std::out_of_range("coordinate index");
  TruncatedSeries s(space, order);
  if (index > 0) s.add_term(Monomial(static_cast<std::size_t>(space.variable_count()), 0), space.x0[index - 1]);
  Monomial m(static_cast<std::size_t>(space.variable_count()), 0);
  m[index] = 1;
  s.add_term(m, Rational(1));
  return s;
}

TruncatedSeries TruncatedSeries::monomial(const SeriesSpace& space, int order, Monomial exponents,
                                          const Rational& coefficient) {
  if (static_cast<int>(exponents.size()) != space.variable_count())
    throw std::invalid_argument("monomial arity mismatch");
  TruncatedSeries s(space, order);
  s.add_term(exponents, coefficient);
  return s;
}

Rational TruncatedSeries::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational TruncatedSeries::constant_term() const {
  return coefficient(Monomial(static_cast<std::size_t>(variable_count()), 0));
}

int TruncatedSeries::degree() const { return terms_.empty() ? -1 : total_degree(terms_.rbegin()->first); }

void TruncatedSeries::add_term(const Monomial& m, const Rational& c) {
  if (static_cast<int>(m.size()) != variable_count()) throw std::invalid_argument("monomial arity mismatch");
  if (c == 0 || total_degree(m) > order_) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

TruncatedSeries TruncatedSeries::truncated(int order) const {
  TruncatedSeries s(space_, order);
  for (const auto& [m, c] : terms_) {
    if (total_degree(m) > order) break;
    s.terms_.emplace_hint(s.terms_.end(), m, c);
  }
  return s;
}

void TruncatedSeries::require_compatible(const TruncatedSeries& other) const {
  if (!(space_ == other.space_)) throw std::invalid_argument("series over different variables or expansion points");
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& other) {
  require_compatible(other);
  if (other.order_ < order_) *this = truncated(other.order_);
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& other) {
  require_compatible(other);
  if (other.order_ < order_) *this = truncated(other.order_);
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  a.require_compatible(b);
  const int order = std::min(a.order_, b.order_);
  TruncatedSeries r(a.space_, order);
  Monomial m(static_cast<std::size_t>(a.variable_count()));
  for (const auto& [ma, ca] : a.terms_) {
    const int da = total_degree(ma);
    if (da > order) break;
    for (const auto& [mb, cb] : b.terms_) {
      if (da + total_degree(mb) > order) break;
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b) { return a + b; }
TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b) { return a * b; }
TruncatedSeries scale(const TruncatedSeries& a, const Rational& c) { return a * c; }

TruncatedSeries diff(const TruncatedSeries& a, int index) {
  if (index < 0 || index >= a.variable_count()) throw std::out_of_range("derivative variable index");
  if (a.order() < 1) throw std::invalid_argument("cannot differentiate a series of order 0");
  TruncatedSeries r(a.space(), a.order() - 1);
  for (const auto& [m, c] : a.terms()) {
    if (m[index] == 0) continue;
    Monomial d = m;
    d[index] -= 1;
    r.add_term(d, c * m[index]);
  }
  return r;
}

TruncatedSeries diff_path(const TruncatedSeries& a, std::span<const int> path) {
  TruncatedSeries r = a;
  for (int index : path) r = diff(r, index);
  return r;
}

TruncatedSeries diff_orders(const TruncatedSeries& a, int t_order, std::span<const int> x_orders) {
  std::vector<int> path(static_cast<std::size_t>(t_order), 0);
  for (std::size_t i = 0; i < x_orders.size(); ++i) path.insert(path.end(), static_cast<std::size_t>(x_orders[i]), static_cast<int>(i) + 1);
  return diff_path(a, path);
}

TruncatedSeries volterra_integrate(const TruncatedSeries& f, int n) {
  if (n < 1) throw std::invalid_argument("volterra_integrate needs n >= 1");
  TruncatedSeries r(f.space(), f.order() + n);
  for (const auto& [m, c] : f.terms()) {
    Monomial shifted = m;
    shifted[0] += n;
    // j! / (j + n)!
    Rational factor(1);
    for (int i = 1; i <= n; ++i) factor /= m[0] + i;
    r.add_term(shifted, c * factor);
  }
  return r;
}

namespace {

template <class T>
std::vector<T> local_coordinates(const SeriesSpace& space, std::span<const T> point) {
  if (static_cast<int>(point.size()) != space.variable_count()) throw std::invalid_argument("point dimension mismatch");
  std::vector<T> local(point.begin(), point.end());
  for (int i = 1; i < space.variable_count(); ++i) {
    if constexpr (std::is_same_v<T, double>)
      local[i] -= to_double(space.x0[i - 1]);
    else
      local[i] -= space.x0[i - 1];
  }
  return local;
}

template <class T>
T evaluate_local(const TruncatedSeries& a, const std::vector<T>& local) {
  T sum(0);
  for (const auto& [m, c] : a.terms()) {
    T term;
    if constexpr (std::is_same_v<T, double>)
      term = to_double(c);
    else
      term = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if constexpr (std::is_same_v<T, double>)
        term *= std::pow(local[i], m[i]);
      else
        term *= pow(local[i], m[i]);
    }
    sum += term;
  }
  return sum;
}

}  // namespace

Rational evaluate(const TruncatedSeries& a, std::span<const Rational> point) {
  return evaluate_local(a, local_coordinates(a.space(), point));
}

double evaluate(const TruncatedSeries& a, std::span<const double> point) {
  return evaluate_local(a, local_coordinates(a.space(), point));
}

namespace {

using TermList = std::vector<std::pair<Monomial, Rational>>;

Interval monomial_sum(const TruncatedSeries::Terms& terms, std::span<const Interval> box) {
  Interval sum(Rational(0));
  for (const auto& [m, c] : terms) {
    Interval term(c);
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i] > 0) term = term * pow(box[i], m[i]);
    sum = sum + term;
  }
  return sum;
}

// Nested Horner scheme, outermost in variable `var`.
Interval horner(const TermList& terms, std::size_t var, std::span<const Interval> box) {
  if (terms.empty()) return Interval(Rational(0));
  if (var == box.size()) {
    Rational s(0);
    for (const auto& [m, c] : terms) s += c;
    return Interval(s);
  }
  int top = 0;
  for (const auto& [m, c] : terms) top = std::max(top, m[var]);
  std::vector<TermList> by_power(static_cast<std::size_t>(top) + 1);
  for (const auto& t : terms) by_power[static_cast<std::size_t>(t.first[var])].push_back(t);
  Interval acc = horner(by_power[static_cast<std::size_t>(top)], var + 1, box);
  for (int p = top - 1; p >= 0; --p) acc = acc * box[var] + horner(by_power[static_cast<std::size_t>(p)], var + 1, box);
  return acc;
}

Interval range_on_cell(const TruncatedSeries& a, std::span<const Interval> local_box) {
  Interval by_terms = monomial_sum(a.terms(), local_box);
  TermList list(a.terms().begin(), a.terms().end());
  Interval by_horner = horner(list, 0, local_box);
  return intersect(by_terms, by_horner);
}

}  // namespace

Interval box_range(const TruncatedSeries& a, const Interval& t, std::span<const Interval> x_box, int subdivisions) {
  const auto& space = a.space();
  if (static_cast<int>(x_box.size()) != space.spatial_dim) throw std::invalid_argument("box dimension mismatch");
  if (subdivisions < 1) throw std::invalid_argument("subdivisions must be positive");
  std::vector<Interval> local;
  local.push_back(t);
  for (int i = 0; i < space.spatial_dim; ++i) local.push_back(x_box[i] - Interval(space.x0[i]));
  if (subdivisions == 1) return range_on_cell(a, local);

  const std::size_t dims = local.size();
  std::vector<int> cell(dims, 0);
  std::vector<Interval> piece(dims);
  std::optional<Interval> result;
  for (;;) {
    for (std::size_t i = 0; i < dims; ++i) {
      Rational step = local[i].width() / subdivisions;
      Rational lo = local[i].lo + step * cell[i];
      Rational hi = cell[i] + 1 == subdivisions ? local[i].hi : lo + step;
      piece[i] = Interval(lo, hi);
    }
    Interval r = range_on_cell(a, piece);
    result = result ? hull(*result, r) : r;
    std::size_t i = 0;
    while (i < dims && ++cell[i] == subdivisions) cell[i++] = 0;
    if (i == dims) break;
  }
  return *result;
}

Grid make_uniform_grid(const Rational& t_half_width, int t_count, std::span<const Interval> omega, int x_count) {
  if (t_count < 1 || x_count < 1) throw std::invalid_argument("grid counts must be positive");
  auto axis = [](const Rational& lo, const Rational& hi, int count) {
    std::vector<Rational> v;
    if (count == 1) {
      v.push_back((lo + hi) / 2);
      return v;
    }
    for (int i = 0; i < count; ++i) {
      Rational p = lo + (hi - lo) * i / (count - 1);
      p.canonicalize();
      v.push_back(p);
    }
    return v;
  };
  std::vector<std::vector<Rational>> axes;
  axes.push_back(axis(-t_half_width, t_half_width, t_count));
  for (const auto& iv : omega) axes.push_back(axis(iv.lo, iv.hi, x_count));

  Grid grid;
  std::vector<std::size_t> idx(axes.size(), 0);
  for (;;) {
    GridPoint p;
    for (std::size_t i = 0; i < axes.size(); ++i) p.push_back(axes[i][idx[i]]);
    grid.points.push_back(std::move(p));
    std::size_t i = axes.size();
    while (i > 0) {
      --i;
      if (++idx[i] < axes[i].size()) break;
      idx[i] = 0;
      if (i == 0) return grid;
    }
  }
}

namespace {

// All (a0, alpha) with a0 < n and a0 + |alpha| <= N, as t-first paths.
void enumerate_orders(int k, int N, int n, std::vector<std::vector<int>>& out) {
  std::vector<int> orders(static_cast<std::size_t>(k) + 1, 0);
  auto rec = [&](auto&& self, std::size_t var, int remaining) -> void {
    if (var == orders.size()) {
      out.push_back(orders);
      return;
    }
    int cap = remaining;
    if (var == 0) cap = std::min(cap, n - 1);
    for (int o = 0; o <= cap; ++o) {
      orders[var] = o;
      self(self, var + 1, remaining - o);
    }
    orders[var] = 0;
  };
  rec(rec, 0, N);
}

}  // namespace

double grid_sup_norm(const TruncatedSeries& a, const Grid& grid, int N, int n) {
  if (grid.empty()) throw std::invalid_argument("empty grid");
  std::vector<std::vector<int>> derivs;
  enumerate_orders(a.space().spatial_dim, N, n, derivs);
  double best = 0.0;
  for (const auto& orders : derivs) {
    int total = std::accumulate(orders.begin(), orders.end(), 0);
    if (total > a.order())
      throw std::invalid_argument("series order " + std::to_string(a.order()) + " too low for derivative of order " +
                                  std::to_string(total));
    TruncatedSeries d = diff_orders(a, orders[0], std::span<const int>(orders).subspan(1));
    for (const auto& p : grid.points) best = std::max(best, std::fabs(to_double(evaluate(d, p))));
  }
  return best;
}

void ExpansionNotes::note(std::string message) {
  inexact = true;
  if (std::find(messages.begin(), messages.end(), message) == messages.end()) messages.push_back(std::move(message));
}

namespace {

Monomial zero_monomial(const TruncatedSeries& a) { return Monomial(static_cast<std::size_t>(a.variable_count()), 0); }

// Sum_j coeffs[j] * h^j by Horner; h must have a zero constant term.
TruncatedSeries compose(const std::vector<Rational>& coeffs, const TruncatedSeries& h) {
  TruncatedSeries acc = TruncatedSeries::constant(h.space(), h.order(), coeffs.back());
  for (std::size_t j = coeffs.size() - 1; j-- > 0;) {
    acc = acc * h;
    acc.add_term(zero_monomial(h), coeffs[j]);
  }
  return acc;
}

TruncatedSeries without_constant(const TruncatedSeries& a) {
  TruncatedSeries h = a;
  h.add_term(zero_monomial(a), -a.constant_term());
  return h;
}

// Taylor coefficients of (a0 + h)^r = a0^r * sum binom(r, j) (h / a0)^j.
std::vector<Rational> binomial_coefficients(const Rational& a0, const Rational& base_value, const Rational& r, int order) {
  std::vector<Rational> c(static_cast<std::size_t>(order) + 1);
  Rational binom(1);
  for (int j = 0; j <= order; ++j) {
    c[static_cast<std::size_t>(j)] = base_value * binom / pow(a0, j);
    binom = binom * (r - j) / (j + 1);
  }
  return c;
}

Rational rational_power_value(const Rational& a0, const Rational& r, const char* what, ExpansionNotes* notes) {
  Rational root;
  if (r.get_num().fits_sint_p() && r.get_den().fits_uint_p()) {
    Rational raised = pow(a0, static_cast<int>(r.get_num().get_si()));
    if (exact_root(raised, static_cast<unsigned>(r.get_den().get_ui()), root)) return root;
  }
  if (notes) notes->note(std::string(what) + " expanded at a point where its value is irrational");
  return from_double(std::pow(to_double(a0), to_double(r)));
}

// ODE-driven coefficients for y' = 1 + sign * y^2 (tan: +1, tanh: -1).
std::vector<Rational> riccati_coefficients(const Rational& y0, int sign, int order) {
  std::vector<Rational> y(static_cast<std::size_t>(order) + 1);
  y[0] = y0;
  for (int j = 0; j < order; ++j) {
    Rational s(0);
    for (int i = 0; i <= j; ++i) s += y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j - i)];
    Rational rhs = sign * s;
    if (j == 0) rhs += 1;
    y[static_cast<std::size_t>(j) + 1] = rhs / (j + 1);
  }
  return y;
}

std::vector<Rational> univariate_coefficients(ElementaryFunction f, const Rational& a0, int order, ExpansionNotes* notes) {
  const double a = to_double(a0);
  const bool at_zero = a0 == 0;
  auto inexact = [&](const char* name) {
    if (notes) notes->note(std::string(name) + " expanded at a non-zero point; base value rounded from double");
  };
  std::vector<Rational> c(static_cast<std::size_t>(order) + 1);
  switch (f) {
    case ElementaryFunction::Exp: {
      Rational e = at_zero ? Rational(1) : from_double(std::exp(a));
      if (!at_zero) inexact("exp");
      for (int j = 0; j <= order; ++j) c[static_cast<std::size_t>(j)] = e / factorial(static_cast<unsigned>(j));
      return c;
    }
    case ElementaryFunction::Sin:
    case ElementaryFunction::Cos: {
      Rational s = at_zero ? Rational(0) : from_double(std::sin(a));
      Rational co = at_zero ? Rational(1) : from_double(std::cos(a));
      if (!at_zero) inexact(f == ElementaryFunction::Sin ? "sin" : "cos");
      const Rational cycle_sin[4] = {s, co, -s, -co};
      const Rational cycle_cos[4] = {co, -s, -co, s};
      const Rational* cycle = f == ElementaryFunction::Sin ? cycle_sin : cycle_cos;
      for (int j = 0; j <= order; ++j) c[static_cast<std::size_t>(j)] = cycle[j % 4] / factorial(static_cast<unsigned>(j));
      return c;
    }
    case ElementaryFunction::Tan: {
      if (std::fabs(std::cos(a)) < 1e-300) throw DomainError("tan expanded at a pole");
      Rational y0 = at_zero ? Rational(0) : from_double(std::tan(a));
      if (!at_zero) inexact("tan");
      return riccati_coefficients(y0, +1, order);
    }
    case ElementaryFunction::Tanh: {
      Rational y0 = at_zero ? Rational(0) : from_double(std::tanh(a));
      if (!at_zero) inexact("tanh");
      return riccati_coefficients(y0, -1, order);
    }
    case ElementaryFunction::Sech: {
      Rational th0 = at_zero ? Rational(0) : from_double(std::tanh(a));
      Rational s0 = at_zero ? Rational(1) : from_double(1.0 / std::cosh(a));
      if (!at_zero) inexact("sech");
      std::vector<Rational> z = riccati_coefficients(th0, -1, order);
      c[0] = s0;
      // sech' = -sech * tanh
      for (int j = 0; j < order; ++j) {
        Rational s(0);
        for (int i = 0; i <= j; ++i) s += c[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(j - i)];
        c[static_cast<std::size_t>(j) + 1] = -s / (j + 1);
      }
      return c;
    }
    case ElementaryFunction::Log: {
      if (a0 <= 0) throw DomainError("log expanded at non-positive value " + to_string(a0));
      c[0] = a0 == 1 ? Rational(0) : from_double(std::log(a));
      if (a0 != 1) inexact("log");
      for (int j = 1; j <= order; ++j) {
        Rational v = Rational(1) / (j * pow(a0, j));
        c[static_cast<std::size_t>(j)] = j % 2 == 1 ? v : Rational(-v);
      }
      return c;
    }
    case ElementaryFunction::Sqrt: {
      if (a0 < 0) throw DomainError("sqrt expanded at negative value " + to_string(a0));
      if (a0 == 0) {
        if (order == 0) return {Rational(0)};
        throw DomainError("sqrt expanded at 0 where it is not differentiable");
      }
      Rational half(1, 2);
      return binomial_coefficients(a0, rational_power_value(a0, half, "sqrt", notes), half, order);
    }
  }
  throw std::logic_error("unknown elementary function");
}

}  // namespace

TruncatedSeries reciprocal(const TruncatedSeries& a) {
  const Rational a0 = a.constant_term();
  if (a0 == 0) throw DomainError("division by a series with zero constant term");
  std::vector<Rational> c(static_cast<std::size_t>(a.order()) + 1);
  for (int j = 0; j <= a.order(); ++j) {
    Rational v = 1 / pow(a0, j + 1);
    c[static_cast<std::size_t>(j)] = j % 2 == 0 ? v : Rational(-v);
  }
  return compose(c, without_constant(a));
}

TruncatedSeries pow(const TruncatedSeries& a, int exponent) {
  if (exponent < 0) return pow(reciprocal(a), -exponent);
  TruncatedSeries result = TruncatedSeries::constant(a.space(), a.order(), Rational(1));
  TruncatedSeries base = a;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent) base = base * base;
  }
  return result;
}

TruncatedSeries rational_pow(const TruncatedSeries& a, const Rational& exponent, ExpansionNotes* notes) {
  if (exponent.get_den() == 1) return pow(a, static_cast<int>(exponent.get_num().get_si()));
  const Rational a0 = a.constant_term();
  if (a0 <= 0) throw DomainError("fractional power of a series with non-positive constant term");
  auto c = binomial_coefficients(a0, rational_power_value(a0, exponent, "power", notes), exponent, a.order());
  return compose(c, without_constant(a));
}

TruncatedSeries apply_function(ElementaryFunction f, const TruncatedSeries& a, ExpansionNotes* notes) {
  auto c = univariate_coefficients(f, a.constant_term(), a.order(), notes);
  return compose(c, without_constant(a));
}

std::vector<std::string> default_variable_names(int spatial_dim) {
  std::vector<std::string> names{"t"};
  if (spatial_dim == 1) {
    names.emplace_back("x");
  } else {
    for (int i = 1; i <= spatial_dim; ++i) names.push_back("x" + std::to_string(i));
  }
  return names;
}

std::string to_string(const TruncatedSeries& a) {
  if (a.is_zero()) return "0";
  auto names = default_variable_names(a.space().spatial_dim);
  for (int i = 1; i < a.variable_count(); ++i) {
    const Rational& shift = a.space().x0[static_cast<std::size_t>(i) - 1];
    if (shift > 0) names[static_cast<std::size_t>(i)] = "(" + names[static_cast<std::size_t>(i)] + " - " + to_string(shift) + ")";
    if (shift < 0) names[static_cast<std::size_t>(i)] = "(" + names[static_cast<std::size_t>(i)] + " + " + to_string(abs(shift)) + ")";
  }
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : a.terms()) {
    const bool negative = c < 0;
    if (first)
      os << (negative ? "-" : "");
    else
      os << (negative ? " - " : " + ");
    os << to_string(abs(c));
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      os << '*' << names[i];
      if (m[i] > 1) os << '^' << m[i];
    }
    first = false;
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const TruncatedSeries& a) { return os << to_string(a); }

}  // namespace picard
