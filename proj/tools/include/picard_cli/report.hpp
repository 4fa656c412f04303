#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "picard/bounds.hpp"
#include "picard/picard.hpp"
#include "picard/problem.hpp"

namespace picard::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exact rational as "p" or "p/q".
nlohmann::json exact(const Rational& value);
/// Floating value tagged as {"diagnostic": v}; null when absent.
nlohmann::json diagnostic(std::optional<double> value);

/// Hex SHA-256 of the given bytes.
std::string sha256_hex(const std::string& bytes);

nlohmann::json problem_json(const ProblemSpec& spec);
nlohmann::json bounds_json(const ProblemSpec& spec, const BoundsReport& bounds);
nlohmann::json iterations_json(const ProblemSpec& spec, const IterationReport& report);
nlohmann::json comparison_json(const std::vector<ComparisonRow>& rows);

/// Shortest round-trip decimal form.
std::string format_double(double value);

/// `p,t,x1..xk,value` for every iterate at every grid point.
std::string grid_csv(const IterationReport& report, int k);
/// `p,emp_error,bound`.
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

}  // namespace picard::cli
