#ifndef SUBLIMIT_RUNNER_CONFIG_HPP
#define SUBLIMIT_RUNNER_CONFIG_HPP

// Experiment configs: strict JSON, one object per experiment or
// {"batch": [...]}. Unknown keys are rejected; errors name the field.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sublimit/signal.hpp"

namespace sublimit::runner {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment { kFig2, kBoundsAudit, kRecovery, kStability, kSampling, kQuantumPipeline };

std::string to_string(Experiment e);

struct ExperimentConfig {
  Experiment kind = Experiment::kFig2;
  TimeGrid grid = TimeGrid::desk_default();
  std::uint64_t seed = 1;
  std::optional<std::string> output_dir;
  nlohmann::ordered_json echo;

  double w = 0.0;
  double t_ds = 0.0;
  double t_sn = 0.0;
  double t_alias = 0.0;
  double x = 0.0;
  double p = 0.0;
  double tolerance = 1e-10;
  std::vector<double> t_ds_list;
  std::optional<double> recover_t_ds;
  std::size_t k_max = 2;
  std::vector<std::pair<double, double>> sweep;
  std::vector<double> noise_levels;
  std::string signal = "demo";
  std::size_t m = 8;
  std::size_t nx = 16;
  std::size_t nt = 16;
  double box_dt = 1.0 / 64.0;
};

/// Parses one config object or a batch.
std::vector<ExperimentConfig> parse_configs(const nlohmann::ordered_json& doc);
std::vector<ExperimentConfig> load_configs(const std::string& path);

/// Built-in configurations behind the `fig2` and `audit` commands.
ExperimentConfig fig2_default();
ExperimentConfig audit_default();

}  // namespace sublimit::runner

#endif  // SUBLIMIT_RUNNER_CONFIG_HPP
