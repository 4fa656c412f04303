#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "picard/interval.hpp"
#include "picard/problem.hpp"
#include "picard/rational.hpp"

namespace picard::cli {

/// Malformed or missing input; maps to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  int t_count = 9;
  int x_count = 5;
};

/// "t:9,x:5"; either key may be omitted.
GridSpec parse_grid_spec(const std::string& text);

struct SolverSettings {
  std::optional<int> order;
  int max_iters = 6;
  Rational tolerance{0};
  Rational theta{1, 2};
  GridSpec grid;
  std::optional<Rational> grid_t_max;
  int subdivisions = 1;
};

struct ProblemFile {
  ProblemDefinition definition;
  SolverSettings solver;
  std::string text;  // raw bytes, for the input hash
};

/// "[-1, 1] x [0, 2]"
std::vector<Interval> parse_omega(const std::string& text);
/// "0, 1/2"
std::vector<Rational> parse_point(const std::string& text);

ProblemFile parse_problem_text(const std::string& text);
ProblemFile read_problem_file(const std::filesystem::path& path);

}  // namespace picard::cli
