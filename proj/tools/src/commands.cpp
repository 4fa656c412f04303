#include "picard_cli/commands.hpp"

#include <fstream>
#include <ostream>
#include <regex>

#include "picard/errors.hpp"
#include "picard_cli/report.hpp"

namespace picard::cli {

using nlohmann::json;

namespace {

struct Loaded {
  ProblemFile file;
  ProblemSpec spec;
};

Loaded load(const std::filesystem::path& path) {
  Loaded l{read_problem_file(path), {}};
  l.spec = build_problem(l.file.definition);
  return l;
}

json base_document(const Loaded& l) {
  json doc;
  doc["problem"] = problem_json(l.spec);
  doc["k_count"] = arg_count(l.spec.n, l.spec.k, l.spec.m);
  doc["slots"] = json::array();
  for (const auto& s : l.spec.slots) doc["slots"].push_back(s.name());
  doc["version"] = kVersion;
  doc["input_hash"] = "sha256:" + sha256_hex(l.file.text);
  return doc;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

void prepare_output(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir.string());
  static const std::regex stale(R"(u_[0-9]+\.txt)");
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && std::regex_match(entry.path().filename().string(), stale))
      std::filesystem::remove(entry.path());
}

std::string approx(const Rational& v) { return format_double(to_double(v)); }

void print_bounds(std::ostream& out, const ProblemSpec& spec, const BoundsReport& b) {
  out << "slots (K = " << spec.slots.size() << "):";
  for (const auto& s : spec.slots) out << ' ' << s.name();
  out << '\n';
  out << "M      = " << to_string(b.M) << "  (~" << approx(b.M) << ")\n";
  out << "L      = " << to_string(b.L) << "  (~" << approx(b.L) << ")\n";
  for (std::size_t i = 0; i < spec.slots.size(); ++i)
    out << "  |dF/d" << spec.slots[i].name() << "| <= " << to_string(b.per_slot[i]) << '\n';
  out << "delta  = " << to_string(b.delta) << "  (~" << approx(b.delta) << ")\n";
  out << "delta1 = " << to_string(b.delta1) << "  (~" << approx(b.delta1) << ")\n";
  out << "gamma  = " << to_string(b.gamma) << "  (theta = " << to_string(b.theta) << ")\n";
}

int exit_for(const std::exception& e) {
  if (dynamic_cast<const DomainError*>(&e)) return kHypothesisFailure;
  return kInputError;
}

template <class Body>
CommandResult guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return CommandResult{exit_for(e), json::object()};
  }
}

}  // namespace

IterationOptions effective_options(const ProblemFile& file, const CommandOptions& options) {
  const SolverSettings& s = file.solver;
  IterationOptions o;
  o.order = options.order ? options.order : s.order;
  o.max_iters = options.iters.value_or(s.max_iters);
  o.tolerance = options.tol ? parse_rational(*options.tol) : s.tolerance;
  o.theta = options.theta ? parse_rational(*options.theta) : s.theta;
  GridSpec grid = options.grid ? parse_grid_spec(*options.grid) : s.grid;
  o.grid_t = grid.t_count;
  o.grid_x = grid.x_count;
  o.grid_t_max = s.grid_t_max;
  o.bounds_subdivisions = s.subdivisions;
  o.force = options.force;
  if (o.max_iters < 1) throw InputError("--iters must be >= 1");
  if (o.order && *o.order < 0) throw InputError("--order must be non-negative");
  if (!(o.theta > 0 && o.theta < 1)) throw InputError("theta must lie in (0, 1)");
  return o;
}

CommandResult cmd_check(const std::filesystem::path& problem, const CommandOptions& options, std::ostream& out,
                        std::ostream& err) {
  return guarded(err, [&] {
    Loaded l = load(problem);
    IterationOptions o = effective_options(l.file, options);
    json doc = base_document(l);
    BoundsOptions bopts;
    bopts.theta = o.theta;
    bopts.order = std::max(o.order.value_or(default_order(l.spec, o.max_iters)), l.spec.m);
    bopts.subdivisions = o.bounds_subdivisions;
    ExpansionNotes notes;
    CommandResult result;
    try {
      BoundsReport b = compute_bounds(l.spec, bopts, &notes);
      doc["bounds"] = bounds_json(l.spec, b);
      const bool ok = b.gamma < 1;
      doc["verdicts"] = {{"bounds_established", true}, {"gamma_below_one", ok}};
      result.exit_code = ok ? kSuccess : kHypothesisFailure;
      if (!options.json) print_bounds(out, l.spec, b);
    } catch (const DomainError& e) {
      doc["bounds"] = nullptr;
      doc["verdicts"] = {{"bounds_established", false}, {"gamma_below_one", false}, {"failure", e.what()}};
      result.exit_code = kHypothesisFailure;
      err << "bounds could not be established: " << e.what() << '\n';
    }
    doc["notes"] = notes.messages;
    if (options.json) out << doc.dump(2) << '\n';
    result.report = std::move(doc);
    return result;
  });
}

namespace {

json solve_document(const Loaded& l, const IterationReport& report, bool forced) {
  json doc = base_document(l);
  doc["bounds"] = report.bounds ? bounds_json(l.spec, *report.bounds) : json(nullptr);
  doc["iterations"] = iterations_json(l.spec, report);
  doc["order"] = report.order;
  doc["route"] = report.route == StartRoute::Corollary ? "corollary" : "standard";
  doc["grid"] = {{"t_half_width", exact(report.grid_t_half_width)}, {"points", report.grid.points.size()}};
  doc["stop_reason"] = std::string(to_string(report.stop_reason));
  doc["forced"] = forced;
  json verdicts;
  verdicts["bounds_established"] = report.bounds.has_value();
  verdicts["gamma_below_one"] = report.bounds && report.bounds->gamma < 1;
  verdicts["initial_conditions"] = report.initial_conditions_ok;
  verdicts["contraction"] = report.contraction_ok;
  if (!report.bounds_failure.empty()) verdicts["failure"] = report.bounds_failure;
  doc["verdicts"] = verdicts;
  doc["notes"] = report.notes.messages;
  return doc;
}

void print_steps(std::ostream& out, const IterationReport& report) {
  out << "p  order  diff_norm  residual  bound\n";
  for (const auto& s : report.steps) {
    out << s.p << "  " << s.u.order() << "  " << (s.diff_norm ? format_double(*s.diff_norm) : "-") << "  "
        << (s.residual ? format_double(*s.residual) : "-") << "  " << (s.bound ? to_string(*s.bound) : "-") << '\n';
  }
  out << "stop: " << to_string(report.stop_reason) << '\n';
}

}  // namespace

CommandResult cmd_solve(const std::filesystem::path& problem, const CommandOptions& options, std::ostream& out,
                        std::ostream& err) {
  return guarded(err, [&] {
    Loaded l = load(problem);
    IterationOptions o = effective_options(l.file, options);
    IterationReport report = iterate(l.spec, o);
    if (!report.bounds_failure.empty()) err << "warning: bounds not established (forced): " << report.bounds_failure << '\n';

    prepare_output(options.output);
    for (const auto& s : report.steps)
      write_file(options.output / ("u_" + std::to_string(s.p) + ".txt"), to_string(s.u) + "\n");
    write_file(options.output / "grid.csv", grid_csv(report, l.spec.k));
    json doc = solve_document(l, report, options.force);
    write_file(options.output / "report.json", doc.dump(2) + "\n");

    print_steps(out, report);
    return CommandResult{kSuccess, std::move(doc)};
  });
}

CommandResult cmd_compare(const std::filesystem::path& problem, const std::string& reference,
                          const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Loaded l = load(problem);
    IterationOptions o = effective_options(l.file, options);
    o.force = false;
    Expr ref = parse_for_problem(l.spec, reference, ExprRole::Reference);
    IterationReport report = iterate(l.spec, o);
    auto rows = compare_to_reference(report, l.spec, ref, report.grid);

    prepare_output(options.output);
    write_file(options.output / "compare.csv", comparison_csv(rows));
    json doc = solve_document(l, report, false);
    doc["reference"] = to_string(ref);
    doc["comparison"] = comparison_json(rows);
    bool violated = false;
    for (const auto& r : rows) violated = violated || r.violated;
    doc["verdicts"]["error_bound_respected"] = !violated;
    write_file(options.output / "report.json", doc.dump(2) + "\n");

    out << "p  emp_error  bound\n";
    for (const auto& r : rows) out << r.p << "  " << format_double(r.emp_error) << "  " << to_string(r.bound) << (r.violated ? "  VIOLATED" : "") << '\n';
    if (violated) err << "empirical error exceeds the a-priori bound\n";
    return CommandResult{violated ? kHypothesisFailure : kSuccess, std::move(doc)};
  });
}

}  // namespace picard::cli
