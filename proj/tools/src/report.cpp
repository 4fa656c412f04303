#include "picard_cli/report.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace picard::cli {

using nlohmann::json;

json exact(const Rational& value) { return to_string(value); }

json diagnostic(std::optional<double> value) {
  if (!value) return nullptr;
  return json{{"diagnostic", *value}};
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

json problem_json(const ProblemSpec& spec) {
  json j;
  j["n"] = spec.n;
  j["k"] = spec.k;
  j["m"] = spec.m;
  j["F"] = to_string(spec.F);
  j["initial"] = json::array();
  for (const auto& c : spec.initial) j["initial"].push_back(to_string(c));
  if (spec.split)
    j["split"] = {{"G", to_string(spec.split->G)}, {"g", to_string(spec.split->g)}};
  else
    j["split"] = nullptr;
  j["omega"] = json::array();
  for (const auto& iv : spec.omega) j["omega"].push_back({exact(iv.lo), exact(iv.hi)});
  j["x0"] = json::array();
  for (const auto& v : spec.x0) j["x0"].push_back(exact(v));
  j["R"] = exact(spec.R);
  j["T0"] = exact(spec.T0);
  j["params"] = json::object();
  for (const auto& [name, v] : spec.params) j["params"][name] = exact(v);
  return j;
}

json bounds_json(const ProblemSpec& spec, const BoundsReport& b) {
  json j;
  j["M"] = exact(b.M);
  j["L"] = exact(b.L);
  j["delta"] = exact(b.delta);
  j["delta1"] = exact(b.delta1);
  j["gamma"] = exact(b.gamma);
  j["theta"] = exact(b.theta);
  j["per_slot_partial_bounds"] = json::array();
  json ranges = json::array();
  for (std::size_t i = 0; i < spec.slots.size(); ++i) {
    std::string path;
    for (int v : spec.slots[i].path) path += v == 0 ? "t" : "x" + std::to_string(v);
    j["per_slot_partial_bounds"].push_back({{"slot", spec.slots[i].name()}, {"path", path}, {"bound", exact(b.per_slot[i])}});
    ranges.push_back({{"slot", spec.slots[i].name()},
                      {"range", {exact(b.box.slot_ranges[i].lo), exact(b.box.slot_ranges[i].hi)}}});
  }
  j["box"] = {{"t", {exact(b.box.t.lo), exact(b.box.t.hi)}}, {"slots", ranges}};
  return j;
}

json iterations_json(const ProblemSpec& spec, const IterationReport& report) {
  (void)spec;
  json arr = json::array();
  for (const auto& s : report.steps) {
    json j;
    j["p"] = s.p;
    j["order"] = s.u.order();
    j["diff_norm"] = diagnostic(s.diff_norm);
    j["diff_norm_cn"] = diagnostic(s.diff_norm_cn);
    j["residual"] = diagnostic(s.residual);
    j["bound13"] = s.bound ? exact(*s.bound) : json(nullptr);
    j["coefficient_bits"] = s.coefficient_bits;
    arr.push_back(std::move(j));
  }
  return arr;
}

json comparison_json(const std::vector<ComparisonRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"p", r.p},
                   {"emp_error", diagnostic(r.emp_error)},
                   {"emp_error_cn", diagnostic(r.emp_error_cn)},
                   {"bound13", exact(r.bound)},
                   {"violated", r.violated},
                   {"violated_cn", r.emp_error_cn > to_double(r.bound)}});
  return arr;
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::runtime_error("cannot format double");
  return std::string(buf.data(), ptr);
}

std::string grid_csv(const IterationReport& report, int k) {
  std::ostringstream out;
  out << "p,t";
  for (int i = 1; i <= k; ++i) out << ",x" << i;
  out << ",value\n";
  for (const auto& s : report.steps)
    for (const auto& pt : report.grid.points) {
      out << s.p;
      for (const auto& c : pt) out << ',' << format_double(to_double(c));
      out << ',' << format_double(to_double(evaluate(s.u, pt))) << '\n';
    }
  return out.str();
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream out;
  out << "p,emp_error,bound\n";
  for (const auto& r : rows) out << r.p << ',' << format_double(r.emp_error) << ',' << to_string(r.bound) << '\n';
  return out.str();
}

}  // namespace picard::cli
