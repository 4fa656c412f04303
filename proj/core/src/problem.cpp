#include "picard/problem.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "picard/errors.hpp"

namespace picard {

int DerivativeSlot::total_order() const {
  int s = t_order;
  for (int a : x_orders) s += a;
  return s;
}

std::string DerivativeSlot::name() const {
  if (total_order() == 0) return "u";
  const int k = static_cast<int>(x_orders.size());
  std::vector<int> sorted = path;
  std::sort(sorted.begin(), sorted.end());
  if (k == 1) {
    std::string s = "u_";
    for (int c : sorted) s += c == 0 ? 't' : 'x';
    return s;
  }
  std::string s = "u_{";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i) s += ' ';
    s += sorted[i] == 0 ? std::string("t") : "x" + std::to_string(sorted[i]);
  }
  return s + "}";
}

namespace {

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

void validate_orders(int n, int k, int m) {
  if (n < 1) throw ProblemError("t-order n must be >= 1");
  if (k < 1) throw ProblemError("spatial dimension k must be >= 1");
  if (m < 0) throw ProblemError("derivative order m must be >= 0");
}

}  // namespace

std::uint64_t arg_count(int n, int k, int m) {
  validate_orders(n, k, m);
  const std::uint64_t kk = static_cast<std::uint64_t>(k);
  if (m < n) return (ipow(kk + 1, m + 1) - 1) / kk;
  const std::uint64_t lower = (ipow(kk + 1, n - 1) - 1) / kk;
  const std::uint64_t geometric = k == 1 ? static_cast<std::uint64_t>(m - n + 2) : (ipow(kk, m - n + 2) - 1) / (kk - 1);
  return lower + ipow(kk + 1, n - 1) * geometric;
}

std::vector<DerivativeSlot> enumerate_slots(int n, int k, int m) {
  validate_orders(n, k, m);
  std::vector<DerivativeSlot> out;
  auto emit = [&](const std::vector<int>& path) {
    DerivativeSlot s;
    s.path = path;
    s.x_orders.assign(static_cast<std::size_t>(k), 0);
    for (int c : path) {
      if (c == 0)
        ++s.t_order;
      else
        ++s.x_orders[static_cast<std::size_t>(c) - 1];
    }
    out.push_back(std::move(s));
  };
  // All paths of `grad_len` entries from {t, x1..xk} followed by `d_len` from {x1..xk}, lexicographic.
  auto level = [&](int grad_len, int d_len) {
    std::vector<int> path(static_cast<std::size_t>(grad_len + d_len), 0);
    for (int i = grad_len; i < grad_len + d_len; ++i) path[static_cast<std::size_t>(i)] = 1;
    for (;;) {
      emit(path);
      int i = grad_len + d_len - 1;
      while (i >= 0 && path[static_cast<std::size_t>(i)] == k) {
        path[static_cast<std::size_t>(i)] = i < grad_len ? 0 : 1;
        --i;
      }
      if (i < 0) return;
      ++path[static_cast<std::size_t>(i)];
    }
  };
  if (m < n) {
    for (int j = 0; j <= m; ++j) level(j, 0);
  } else {
    for (int j = 0; j <= n - 1; ++j) level(j, 0);
    for (int j = 1; j <= m - n + 1; ++j) level(n - 1, j);
  }
  return out;
}

std::optional<int> canonical_slot(const std::vector<DerivativeSlot>& slots, int t_order, const std::vector<int>& x_orders) {
  for (std::size_t i = 0; i < slots.size(); ++i)
    if (slots[i].t_order == t_order && slots[i].x_orders == x_orders) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<std::pair<int, std::vector<int>>> parse_derivative_token(std::string_view name, int k) {
  if (name == "u") return std::pair{0, std::vector<int>(static_cast<std::size_t>(k), 0)};
  if (name.size() < 3 || name.substr(0, 2) != "u_") return std::nullopt;
  std::string_view rest = name.substr(2);
  int t = 0;
  std::vector<int> x(static_cast<std::size_t>(k), 0);
  if (rest.front() == '{') {
    if (rest.back() != '}') return std::nullopt;
    std::istringstream in{std::string(rest.substr(1, rest.size() - 2))};
    std::string tok;
    bool any = false;
    while (in >> tok) {
      any = true;
      if (tok == "t") {
        ++t;
      } else if (tok == "x" && k == 1) {
        ++x[0];
      } else if (tok.size() > 1 && tok[0] == 'x' && std::all_of(tok.begin() + 1, tok.end(), ::isdigit)) {
        int i = std::stoi(tok.substr(1));
        if (i < 1 || i > k) throw ProblemError("coordinate '" + tok + "' out of range in '" + std::string(name) + "'");
        ++x[static_cast<std::size_t>(i) - 1];
      } else {
        return std::nullopt;
      }
    }
    if (!any) return std::nullopt;
    return std::pair{t, x};
  }
  if (k != 1) return std::nullopt;
  for (char c : rest) {
    if (c == 't')
      ++t;
    else if (c == 'x')
      ++x[0];
    else
      return std::nullopt;
  }
  return std::pair{t, x};
}

int ProblemSpec::max_referenced_order() const {
  int best = 0;
  for (int s : referenced_slots(F)) best = std::max(best, slots[static_cast<std::size_t>(s)].total_order());
  if (split)
    for (int s : referenced_slots(split->G)) best = std::max(best, slots[static_cast<std::size_t>(s)].total_order());
  return best;
}

VariableTable make_variable_table(int n, int k, int m, const std::vector<DerivativeSlot>& slots,
                                  const std::map<std::string, Rational>& params, ExprRole role) {
  VariableTable table;
  for (const auto& [name, value] : params) table.add_parameter(name);
  if (role != ExprRole::Initial) table.add_coordinate("t", 0);
  if (k == 1) table.add_coordinate("x", 1);
  for (int i = 1; i <= k; ++i) table.add_coordinate("x" + std::to_string(i), i);
  if (role == ExprRole::RightHandSide) {
    table.set_resolver([n, k, m, slots](std::string_view name) -> std::optional<Expr> {
      auto token = parse_derivative_token(name, k);
      if (!token) return std::nullopt;
      const auto& [t, x] = *token;
      int total = t;
      for (int a : x) total += a;
      if (t >= n)
        throw ProblemError("'" + std::string(name) + "' has t-order " + std::to_string(t) + " but F may only use t-orders below n = " +
                           std::to_string(n));
      if (total > m)
        throw ProblemError("'" + std::string(name) + "' has order " + std::to_string(total) + " above m = " + std::to_string(m));
      auto idx = canonical_slot(slots, t, x);
      if (!idx) throw ProblemError("'" + std::string(name) + "' is not an argument of F for these orders");
      return Expr::variable(VarRef::slot(*idx), slots[static_cast<std::size_t>(*idx)].name());
    });
  }
  return table;
}

namespace {

Expr parse_role(const ProblemDefinition& def, const std::vector<DerivativeSlot>& slots, const std::string& text, ExprRole role,
                const char* what) {
  try {
    Expr e = parse_expression(text, make_variable_table(def.n, def.k, def.m, slots, def.params, role));
    return bind_parameters(e, def.params);
  } catch (const ParseError& err) {
    throw ParseError(std::string(what) + ": " + err.message(), err.position());
  }
}

std::vector<Rational> random_point(std::mt19937_64& rng, const Interval& t, const std::vector<Interval>& omega) {
  auto sample = [&](const Interval& iv) {
    std::uniform_int_distribution<int> dist(0, 1 << 20);
    Rational frac(dist(rng), 1 << 20);
    frac.canonicalize();
    return Rational(iv.lo + (iv.hi - iv.lo) * frac);
  };
  std::vector<Rational> p{sample(t)};
  for (const auto& iv : omega) p.push_back(sample(iv));
  return p;
}

bool numbers_agree(const Number& a, const Number& b) {
  if (is_exact(a) && is_exact(b)) return std::get<Rational>(a) == std::get<Rational>(b);
  double x = to_double(a);
  double y = to_double(b);
  return std::fabs(x - y) <= 1e-12 * std::max({1.0, std::fabs(x), std::fabs(y)});
}

void validate_split(const ProblemSpec& spec) {
  if (!referenced_slots(spec.split->g).empty()) throw ProblemError("forcing term g must not depend on u");
  std::mt19937_64 rng(20180907);
  const Interval t(-spec.T0, spec.T0);
  const Interval slot_box(Rational(-2), Rational(2));
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Number> coords;
    for (auto& v : random_point(rng, t, spec.omega)) coords.emplace_back(v);
    std::vector<Number> slot_values;
    for (std::size_t s = 0; s < spec.slots.size(); ++s) slot_values.emplace_back(random_point(rng, slot_box, {})[0]);
    Env<Number> env{coords, slot_values};
    Number f;
    Number gg;
    try {
      f = eval_scalar(spec.F, env);
      gg = eval_scalar(spec.split->G + spec.split->g, env);
    } catch (const DomainError&) {
      continue;
    }
    if (!numbers_agree(f, gg)) throw ProblemError("split G + g does not reproduce F");
  }
}

}  // namespace

ProblemSpec build_problem(const ProblemDefinition& def) {
  validate_orders(def.n, def.k, def.m);
  ProblemSpec spec;
  spec.n = def.n;
  spec.k = def.k;
  spec.m = def.m;
  spec.omega = def.omega;
  spec.x0 = def.x0;
  spec.R = def.R;
  spec.T0 = def.T0;
  spec.params = def.params;
  spec.slots = enumerate_slots(def.n, def.k, def.m);

  if (static_cast<int>(spec.omega.size()) != def.k) throw ProblemError("omega needs one interval per spatial axis");
  if (static_cast<int>(spec.x0.size()) != def.k) throw ProblemError("x0 needs one coordinate per spatial axis");
  for (int i = 0; i < def.k; ++i)
    if (!spec.omega[static_cast<std::size_t>(i)].contains(spec.x0[static_cast<std::size_t>(i)]))
      throw ProblemError("x0 lies outside omega");
  if (spec.R <= 0) throw ProblemError("R must be positive");
  if (spec.T0 <= 0) throw ProblemError("T0 must be positive");
  if (static_cast<int>(def.initial.size()) != def.n)
    throw ProblemError("expected " + std::to_string(def.n) + " initial functions, got " + std::to_string(def.initial.size()));

  spec.F = parse_role(def, spec.slots, def.F, ExprRole::RightHandSide, "F");
  for (std::size_t i = 0; i < def.initial.size(); ++i)
    spec.initial.push_back(parse_role(def, spec.slots, def.initial[i], ExprRole::Initial, ("c" + std::to_string(i + 1)).c_str()));
  if (def.split) {
    spec.split = ForcingSplit{parse_role(def, spec.slots, def.split->first, ExprRole::RightHandSide, "G"),
                              parse_role(def, spec.slots, def.split->second, ExprRole::Forcing, "g")};
    validate_split(spec);
  }
  return spec;
}

Expr parse_for_problem(const ProblemSpec& spec, std::string_view text, ExprRole role) {
  Expr e = parse_expression(text, make_variable_table(spec.n, spec.k, spec.m, spec.slots, spec.params, role));
  return bind_parameters(e, spec.params);
}

TruncatedSeries initial_function_series(const ProblemSpec& spec, std::size_t i, int order, ExpansionNotes* notes) {
  auto coords = coordinate_series(spec.space(), order);
  return eval_series(spec.initial.at(i), Env<TruncatedSeries>{coords, {}}, order, notes);
}

TruncatedSeries build_u0(const ProblemSpec& spec, int order, ExpansionNotes* notes) {
  const SeriesSpace space = spec.space();
  TruncatedSeries u0(space, order);
  for (int i = 1; i <= spec.n; ++i) {
    const int shift = i - 1;
    if (shift > order) break;
    TruncatedSeries c = initial_function_series(spec, static_cast<std::size_t>(i - 1), order - shift, notes);
    for (const auto& [mono, coeff] : c.terms()) {
      Monomial m = mono;
      m[0] += shift;
      u0.add_term(m, coeff / factorial(static_cast<unsigned>(shift)));
    }
  }
  return u0;
}

TruncatedSeries build_u0_bar(const ProblemSpec& spec, int order, ExpansionNotes* notes) {
  if (!spec.split) throw ProblemError("no split F = G + g given");
  TruncatedSeries u0 = build_u0(spec, order, notes);
  if (order < spec.n) return u0;
  auto coords = coordinate_series(spec.space(), order - spec.n);
  TruncatedSeries g = eval_series(spec.split->g, Env<TruncatedSeries>{coords, {}}, order - spec.n, notes);
  return u0 + volterra_integrate(g, spec.n);
}

}  // namespace picard
