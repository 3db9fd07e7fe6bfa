#include "report.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "sublimit/csv.hpp"
#include "sublimit/error.hpp"

namespace sublimit::runner {
namespace {

bool record(RunReport& r, std::string name, double value, double threshold, const char* cmp, bool pass) {
  r.checks.push_back({std::move(name), value, threshold, cmp, pass});
  return pass;
}

nlohmann::ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

bool RunReport::le(std::string name, double value, double threshold) {
  return record(*this, std::move(name), value, threshold, "<=", value <= threshold);
}
bool RunReport::lt(std::string name, double value, double threshold) {
  return record(*this, std::move(name), value, threshold, "<", value < threshold);
}
bool RunReport::ge(std::string name, double value, double threshold) {
  return record(*this, std::move(name), value, threshold, ">=", value >= threshold);
}
bool RunReport::gt(std::string name, double value, double threshold) {
  return record(*this, std::move(name), value, threshold, ">", value > threshold);
}
bool RunReport::holds(std::string name, bool condition) {
  return record(*this, std::move(name), condition ? 1.0 : 0.0, 1.0, "==", condition);
}

void RunReport::refused(std::string component, std::string reason, bool expected) {
  refusals.push_back({std::move(component), std::move(reason), expected});
}

bool RunReport::passed() const {
  if (!error.empty() || checks.empty()) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  for (const auto& r : refusals)
    if (!r.expected) return false;
  return true;
}

nlohmann::ordered_json RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["experiment"] = to_string(kind);
  j["pass"] = passed();
  j["config"] = config;
  j["seed"] = seed;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks)
    j["checks"].push_back({{"name", c.name},
                           {"pass", c.pass},
                           {"value", number(c.value)},
                           {"comparator", c.comparator},
                           {"threshold", number(c.threshold)}});
  j["refusals"] = nlohmann::ordered_json::array();
  for (const auto& r : refusals)
    j["refusals"].push_back({{"component", r.component}, {"reason", r.reason}, {"expected", r.expected}});
  j["metrics"] = metrics;
  j["artifacts"] = artifacts;
  j["wall_time_s"] = wall_time_s;
  if (!error.empty()) j["error"] = error;
  return j;
}

void write_artifact(RunReport& report, const std::filesystem::path& dir, const std::string& name,
                    const std::function<void(std::ostream&)>& body) {
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw Error("cannot write " + (dir / name).string());
  body(out);
  if (!out) throw Error("write failed for " + (dir / name).string());
  report.artifacts.push_back(name);
}

void print_summary(std::ostream& out, const RunReport& report, const std::string& label) {
  for (const auto& c : report.checks)
    out << (c.pass ? "  ok    " : "  FAIL  ") << c.name << ": " << format_number(c.value) << ' ' << c.comparator
        << ' ' << format_number(c.threshold) << '\n';
  for (const auto& r : report.refusals)
    out << (r.expected ? "  refused (expected) " : "  refused (UNEXPECTED) ") << r.component << ": " << r.reason
        << '\n';
  if (!report.error.empty()) out << "  error: " << report.error << '\n';
  out << (report.passed() ? "PASS " : "FAIL ") << label << '\n';
}

}  // namespace sublimit::runner
