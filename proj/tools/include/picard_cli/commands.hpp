#pragma once

#include <filesystem>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "picard/picard.hpp"
#include "picard_cli/problem_file.hpp"

namespace picard::cli {

enum ExitCode : int { kSuccess = 0, kInputError = 1, kHypothesisFailure = 2 };

/// Command-line overrides of the [solver] section.
struct CommandOptions {
  std::optional<int> order;
  std::optional<int> iters;
  std::optional<std::string> tol;
  std::optional<std::string> theta;
  std::optional<std::string> grid;
  bool force = false;
  std::filesystem::path output = ".";
  bool json = false;  // check: print the report instead of the summary
};

struct CommandResult {
  int exit_code = kSuccess;
  nlohmann::json report;
};

/// File settings with flag overrides applied.
IterationOptions effective_options(const ProblemFile& file, const CommandOptions& options);

CommandResult cmd_check(const std::filesystem::path& problem, const CommandOptions& options, std::ostream& out,
                        std::ostream& err);
CommandResult cmd_solve(const std::filesystem::path& problem, const CommandOptions& options, std::ostream& out,
                        std::ostream& err);
CommandResult cmd_compare(const std::filesystem::path& problem, const std::string& reference,
                          const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace picard::cli
