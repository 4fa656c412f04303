#include "picard_cli/problem_file.hpp"

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <regex>
#include <sstream>

#include "picard/errors.hpp"

namespace picard::cli {

namespace pt = boost::property_tree;

namespace {

Rational rational_value(const std::string& key, const std::string& text) {
  try {
    return parse_rational(boost::algorithm::trim_copy(text));
  } catch (const std::exception& err) {
    throw InputError("bad rational for '" + key + "': " + err.what());
  }
}

int int_value(const std::string& key, const std::string& text) {
  Rational r = rational_value(key, text);
  if (r.get_den() != 1 || !r.get_num().fits_sint_p()) throw InputError("'" + key + "' must be an integer");
  return static_cast<int>(r.get_num().get_si());
}

std::string required(const pt::ptree& tree, const std::string& key) {
  auto v = tree.get_optional<std::string>(key);
  if (!v) throw InputError("missing key '" + key + "'");
  return boost::algorithm::trim_copy(*v);
}

std::optional<std::string> optional_key(const pt::ptree& tree, const std::string& key) {
  auto v = tree.get_optional<std::string>(key);
  if (!v) return std::nullopt;
  return boost::algorithm::trim_copy(*v);
}

}  // namespace

GridSpec parse_grid_spec(const std::string& text) {
  GridSpec spec;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    boost::algorithm::trim(part);
    auto colon = part.find(':');
    if (colon == std::string::npos) throw InputError("grid spec entry '" + part + "' needs key:count");
    std::string key = boost::algorithm::trim_copy(part.substr(0, colon));
    int count = int_value("grid " + key, part.substr(colon + 1));
    if (count < 1) throw InputError("grid counts must be positive");
    if (key == "t")
      spec.t_count = count;
    else if (key == "x")
      spec.x_count = count;
    else
      throw InputError("unknown grid axis '" + key + "'");
  }
  return spec;
}

std::vector<Interval> parse_omega(const std::string& text) {
  static const std::regex interval(R"(\[\s*([^,\]]+?)\s*,\s*([^\]]+?)\s*\])");
  std::vector<Interval> out;
  std::string rest;
  std::size_t last = 0;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), interval); it != std::sregex_iterator(); ++it) {
    rest += text.substr(last, static_cast<std::size_t>(it->position()) - last);
    last = static_cast<std::size_t>(it->position() + it->length());
    Rational lo = rational_value("omega", (*it)[1]);
    Rational hi = rational_value("omega", (*it)[2]);
    if (lo > hi) throw InputError("omega interval with lower end above upper end");
    out.emplace_back(lo, hi);
  }
  rest += text.substr(last);
  for (char c : rest)
    if (!std::isspace(static_cast<unsigned char>(c)) && c != 'x' && c != '*')
      throw InputError("cannot read omega '" + text + "'");
  if (out.empty()) throw InputError("omega needs at least one interval");
  return out;
}

std::vector<Rational> parse_point(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(rational_value("x0", part));
  if (out.empty()) throw InputError("empty point");
  return out;
}

ProblemFile parse_problem_text(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& err) {
    throw InputError(std::string("problem file: ") + err.what());
  }

  ProblemFile file;
  file.text = text;
  ProblemDefinition& def = file.definition;
  def.n = int_value("problem.n", required(tree, "problem.n"));
  def.k = int_value("problem.k", required(tree, "problem.k"));
  def.m = int_value("problem.m", required(tree, "problem.m"));
  def.F = required(tree, "problem.F");
  for (int i = 1; i <= def.n; ++i) def.initial.push_back(required(tree, "initial.c" + std::to_string(i)));

  auto G = optional_key(tree, "split.G");
  auto g = optional_key(tree, "split.g");
  if (G.has_value() != g.has_value()) throw InputError("[split] needs both G and g");
  if (G) def.split = std::make_pair(*G, *g);

  def.omega = parse_omega(required(tree, "domain.omega"));
  def.x0 = parse_point(required(tree, "domain.x0"));
  def.R = rational_value("domain.R", required(tree, "domain.R"));
  def.T0 = rational_value("domain.T0", required(tree, "domain.T0"));

  if (auto params = tree.get_child_optional("params"))
    for (const auto& [name, node] : *params) def.params[name] = rational_value("params." + name, node.data());

  SolverSettings& s = file.solver;
  if (auto v = optional_key(tree, "solver.order")) s.order = int_value("solver.order", *v);
  if (auto v = optional_key(tree, "solver.max_iters")) s.max_iters = int_value("solver.max_iters", *v);
  if (auto v = optional_key(tree, "solver.tolerance")) s.tolerance = rational_value("solver.tolerance", *v);
  if (auto v = optional_key(tree, "solver.theta")) s.theta = rational_value("solver.theta", *v);
  if (auto v = optional_key(tree, "solver.grid")) s.grid = parse_grid_spec(*v);
  if (auto v = optional_key(tree, "solver.grid_t_max")) s.grid_t_max = rational_value("solver.grid_t_max", *v);
  if (auto v = optional_key(tree, "solver.subdivisions")) s.subdivisions = int_value("solver.subdivisions", *v);
  if (s.max_iters < 1) throw InputError("max_iters must be >= 1");
  if (s.subdivisions < 1 || s.subdivisions > 16) throw InputError("subdivisions must lie in 1..16");
  return file;
}

ProblemFile read_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open problem file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_text(buf.str());
}

}  // namespace picard::cli
