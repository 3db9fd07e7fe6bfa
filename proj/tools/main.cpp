#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "runner/config.hpp"
#include "runner/experiments.hpp"

namespace {

using namespace sublimit::runner;

constexpr int kExitChecksFailed = 1;
constexpr int kExitBadConfig = 2;

std::string default_out_dir() {
  if (const char* env = std::getenv("SUBLIMIT_OUT_DIR"); env && *env) return env;
  return "sublimit_out";
}

int finish(const BatchResult& result, const std::string& out_dir) {
  for (std::size_t i = 0; i < result.reports.size(); ++i) print_summary(std::cout, result.reports[i], result.labels[i]);
  std::cout << "artifacts in " << out_dir << '\n';
  return result.passed() ? 0 : kExitChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sublimit: recovery of bandlimited signals from data with an erased interval"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run the experiment(s) described by a JSON config");
  run->add_option("config", config_path, "Config file (single experiment or {\"batch\": [...]})")->required();
  run->add_option("--out", out, "Output directory (default: config output_dir, $SUBLIMIT_OUT_DIR, ./sublimit_out)");
  run->add_option("--seed", seed, "Override the seed of every experiment");

  auto* fig2 = app.add_subcommand("fig2", "Spectra for W = 2, T_DS in {1, 1/4, 1/64} and the copy-sum recovery");
  fig2->add_option("--out", out, "Output directory");
  auto* audit = app.add_subcommand("audit", "Audit the operator, concentration and spill bounds over a WT sweep");
  audit->add_option("--out", out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<ExperimentConfig> configs;
    if (*run)
      configs = load_configs(config_path);
    else if (*fig2)
      configs = {fig2_default()};
    else
      configs = {audit_default()};

    std::string dir = out.value_or("");
    if (dir.empty() && configs.size() == 1 && configs.front().output_dir) dir = *configs.front().output_dir;
    if (dir.empty()) dir = default_out_dir();
    return finish(run_batch(std::move(configs), dir, seed), dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitChecksFailed;
  }
}
