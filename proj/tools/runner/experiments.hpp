#ifndef SUBLIMIT_RUNNER_EXPERIMENTS_HPP
#define SUBLIMIT_RUNNER_EXPERIMENTS_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "report.hpp"

namespace sublimit::runner {

/// Runs one experiment, writing artifacts and report.json into `out_dir`.
/// Library errors end up in RunReport::error rather than propagating.
RunReport run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

struct BatchResult {
  std::vector<std::string> labels;
  std::vector<RunReport> reports;
  bool passed() const;
};

/// Single configs write straight into `out_dir`; batches get one
/// subdirectory per entry (`00_fig2`, `01_recovery`, ...) and run in parallel.
BatchResult run_batch(std::vector<ExperimentConfig> configs, const std::filesystem::path& out_dir,
                      std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace sublimit::runner

#endif  // SUBLIMIT_RUNNER_EXPERIMENTS_HPP
