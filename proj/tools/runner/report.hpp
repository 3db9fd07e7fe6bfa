#ifndef SUBLIMIT_RUNNER_REPORT_HPP
#define SUBLIMIT_RUNNER_REPORT_HPP

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace sublimit::runner {

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string comparator;  // "<=", "<", ">=", ">", "=="
  bool pass = false;
};

struct Refusal {
  std::string component;
  std::string reason;
  bool expected = false;
};

struct RunReport {
  Experiment kind = Experiment::kFig2;
  nlohmann::ordered_json config;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  std::vector<Refusal> refusals;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  std::vector<std::string> artifacts;
  double wall_time_s = 0.0;
  /// Set when the experiment aborted with an error.
  std::string error;

  /// Records and returns the outcome.
  bool le(std::string name, double value, double threshold);
  bool lt(std::string name, double value, double threshold);
  bool ge(std::string name, double value, double threshold);
  bool gt(std::string name, double value, double threshold);
  bool holds(std::string name, bool condition);
  void refused(std::string component, std::string reason, bool expected);

  bool passed() const;
  nlohmann::ordered_json to_json() const;
};

/// Writes `dir/name` through `body` and records it as an artifact.
void write_artifact(RunReport& report, const std::filesystem::path& dir, const std::string& name,
                    const std::function<void(std::ostream&)>& body);

/// One line per check plus a verdict.
void print_summary(std::ostream& out, const RunReport& report, const std::string& label);

}  // namespace sublimit::runner

#endif  // SUBLIMIT_RUNNER_REPORT_HPP
