#include <CLI11.hpp>
#include <iostream>

#include "picard_cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace picard::cli;
  CLI::App app{"Picard iteration with truncated Taylor series for PDE initial value problems"};
  app.require_subcommand(1);

  CommandOptions opts;
  std::string problem;
  std::string reference;
  std::string output = ".";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("problem", problem, "problem file (.ini)")->required();
    cmd->add_option("--order", opts.order, "truncation order d");
    cmd->add_option("--iters", opts.iters, "number of iterations P");
    cmd->add_option("--tol", opts.tol, "stop when sup |u_p - u_{p-1}| <= tol");
    cmd->add_option("--theta", opts.theta, "contraction target in (0, 1)");
    cmd->add_option("--grid", opts.grid, "grid spec, e.g. t:9,x:5");
  };

  auto* check = app.add_subcommand("check", "estimate M, L, delta, delta1 and gamma");
  add_common(check);
  check->add_flag("--json", opts.json, "print the report as JSON");

  auto* solve = app.add_subcommand("solve", "run the iteration and write series, grid and report");
  add_common(solve);
  solve->add_flag("--force", opts.force, "iterate even when the bounds cannot be established");
  solve->add_option("--output", output, "output directory");

  auto* compare = app.add_subcommand("compare", "compare iterates with a reference solution");
  add_common(compare);
  compare->add_option("--reference", reference, "reference solution u(t, x)")->required();
  compare->add_option("--output", output, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kSuccess : kInputError;
  }
  opts.output = output;

  CommandResult result;
  if (*check)
    result = cmd_check(problem, opts, std::cout, std::cerr);
  else if (*solve)
    result = cmd_solve(problem, opts, std::cout, std::cerr);
  else
    result = cmd_compare(problem, reference, opts, std::cout, std::cerr);
  return result.exit_code;
}
