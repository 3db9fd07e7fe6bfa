#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace sublimit::runner {
namespace {

using Json = nlohmann::ordered_json;

struct Schema {
  std::set<std::string> required;
  std::set<std::string> optional;
};

const std::set<std::string> kCommon = {"experiment", "grid", "seed", "output_dir"};

Schema schema_for(Experiment e) {
  switch (e) {
    case Experiment::kFig2: return {{"W", "T_DS", "T_SN", "k_max"}, {"recover_T_DS"}};
    case Experiment::kBoundsAudit: return {{"sweep"}, {}};
    case Experiment::kRecovery: return {{"W", "T_DS"}, {"tolerance", "signal"}};
    case Experiment::kStability: return {{"W", "T_DS", "noise_levels"}, {"tolerance"}};
    case Experiment::kSampling: return {{"W", "T_SN", "T_alias"}, {}};
    case Experiment::kQuantumPipeline: return {{"P", "X", "M"}, {"nx", "nt", "dt", "tolerance"}};
  }
  return {};
}

Experiment parse_kind(const Json& j, const std::string& where) {
  if (!j.contains("experiment")) throw ConfigError(where + "missing required field `experiment`");
  if (!j["experiment"].is_string()) throw ConfigError(where + "field `experiment` must be a string");
  const auto name = j["experiment"].get<std::string>();
  for (const auto e : {Experiment::kFig2, Experiment::kBoundsAudit, Experiment::kRecovery, Experiment::kStability,
                       Experiment::kSampling, Experiment::kQuantumPipeline})
    if (to_string(e) == name) return e;
  throw ConfigError(where + "field `experiment`: unknown kind '" + name + "'");
}

double number(const Json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_number()) throw ConfigError(where + "field `" + key + "` must be a number");
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + "field `" + key + "` must be finite");
  return v;
}

double positive(const Json& j, const std::string& key, const std::string& where) {
  const double v = number(j, key, where);
  if (!(v > 0.0)) throw ConfigError(where + "field `" + key + "` must be positive");
  return v;
}

double non_negative(const Json& j, const std::string& key, const std::string& where) {
  const double v = number(j, key, where);
  if (v < 0.0) throw ConfigError(where + "field `" + key + "` must be non-negative");
  return v;
}

std::size_t count(const Json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_number_integer() || j.at(key).get<std::int64_t>() < 0)
    throw ConfigError(where + "field `" + key + "` must be a non-negative integer");
  return j.at(key).get<std::size_t>();
}

std::vector<double> number_list(const Json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_array() || j.at(key).empty()) throw ConfigError(where + "field `" + key + "` must be a non-empty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.at(key).size(); ++i) {
    const auto& v = j.at(key)[i];
    if (!v.is_number() || v.get<double>() < 0.0)
      throw ConfigError(where + "field `" + key + "[" + std::to_string(i) + "]` must be a non-negative number");
    out.push_back(v.get<double>());
  }
  return out;
}

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::set<std::string>& required,
                const std::string& where, const std::string& prefix = "") {
  for (const auto& [key, value] : j.items())
    if (!allowed.contains(key)) throw ConfigError(where + "unknown key `" + prefix + key + "`");
  for (const auto& key : required)
    if (!j.contains(key)) throw ConfigError(where + "missing required field `" + prefix + key + "`");
}

TimeGrid parse_grid(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + "field `grid` must be an object");
  check_keys(j, {"t_start", "dt", "n"}, {"t_start", "dt", "n"}, where, "grid.");
  const double t_start = number(j, "t_start", where);
  const double dt = positive(j, "dt", where);
  const std::size_t n = count(j, "n", where);
  if (n < 2 || n % 2) throw ConfigError(where + "field `grid.n` must be even and >= 2");
  return TimeGrid(t_start, dt, n);
}

ExperimentConfig parse_one(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + "experiment config must be a JSON object");
  ExperimentConfig c;
  c.kind = parse_kind(j, where);
  const Schema schema = schema_for(c.kind);
  std::set<std::string> allowed = kCommon;
  allowed.insert(schema.required.begin(), schema.required.end());
  allowed.insert(schema.optional.begin(), schema.optional.end());
  check_keys(j, allowed, schema.required, where);
  c.echo = j;

  if (j.contains("grid")) c.grid = parse_grid(j["grid"], where);
  if (j.contains("seed")) c.seed = count(j, "seed", where);
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) throw ConfigError(where + "field `output_dir` must be a string");
    c.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("tolerance")) {
    c.tolerance = positive(j, "tolerance", where);
    if (c.tolerance >= 1.0) throw ConfigError(where + "field `tolerance` must be below 1");
  }

  switch (c.kind) {
    case Experiment::kFig2:
      c.w = positive(j, "W", where);
      c.t_ds_list = number_list(j, "T_DS", where);
      c.t_sn = positive(j, "T_SN", where);
      c.k_max = count(j, "k_max", where);
      if (j.contains("recover_T_DS")) c.recover_t_ds = non_negative(j, "recover_T_DS", where);
      if (c.t_sn * c.w > 1.0 + 1e-12) throw ConfigError(where + "field `T_SN` must not exceed 1/W");
      break;
    case Experiment::kBoundsAudit: {
      const auto& sweep = j["sweep"];
      if (!sweep.is_array() || sweep.empty()) throw ConfigError(where + "field `sweep` must be a non-empty array");
      for (std::size_t i = 0; i < sweep.size(); ++i) {
        const std::string item = "sweep[" + std::to_string(i) + "].";
        if (!sweep[i].is_object()) throw ConfigError(where + "field `sweep[" + std::to_string(i) + "]` must be an object");
        check_keys(sweep[i], {"W", "T"}, {"W", "T"}, where, item);
        if (!sweep[i]["W"].is_number() || !(sweep[i]["W"].get<double>() > 0.0))
          throw ConfigError(where + "field `" + item + "W` must be a positive number");
        if (!sweep[i]["T"].is_number() || !(sweep[i]["T"].get<double>() > 0.0))
          throw ConfigError(where + "field `" + item + "T` must be a positive number");
        c.sweep.emplace_back(sweep[i]["W"].get<double>(), sweep[i]["T"].get<double>());
      }
      break;
    }
    case Experiment::kRecovery:
      c.w = positive(j, "W", where);
      c.t_ds = non_negative(j, "T_DS", where);
      if (j.contains("signal")) {
        if (!j["signal"].is_string() || (j["signal"] != "demo" && j["signal"] != "random"))
          throw ConfigError(where + "field `signal` must be \"demo\" or \"random\"");
        c.signal = j["signal"].get<std::string>();
      }
      break;
    case Experiment::kStability:
      c.w = positive(j, "W", where);
      c.t_ds = non_negative(j, "T_DS", where);
      c.noise_levels = number_list(j, "noise_levels", where);
      c.tolerance = j.contains("tolerance") ? c.tolerance : 1e-12;
      break;
    case Experiment::kSampling:
      c.w = positive(j, "W", where);
      c.t_sn = positive(j, "T_SN", where);
      c.t_alias = positive(j, "T_alias", where);
      if (c.t_sn * c.w > 1.0 + 1e-12) throw ConfigError(where + "field `T_SN` must not exceed 1/W");
      if (c.t_alias * c.w <= 1.0) throw ConfigError(where + "field `T_alias` must exceed 1/W to alias");
      break;
    case Experiment::kQuantumPipeline:
      c.p = positive(j, "P", where);
      c.x = non_negative(j, "X", where);
      c.m = count(j, "M", where);
      if (c.m < 3) throw ConfigError(where + "field `M` must be at least 3");
      if (j.contains("nx")) c.nx = count(j, "nx", where);
      if (j.contains("nt")) c.nt = count(j, "nt", where);
      if (j.contains("dt")) c.box_dt = positive(j, "dt", where);
      c.tolerance = j.contains("tolerance") ? c.tolerance : 1e-12;
      break;
  }
  return c;
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::kFig2: return "fig2";
    case Experiment::kBoundsAudit: return "bounds_audit";
    case Experiment::kRecovery: return "recovery";
    case Experiment::kStability: return "stability";
    case Experiment::kSampling: return "sampling";
    case Experiment::kQuantumPipeline: return "quantum_pipeline";
  }
  return "unknown";
}

std::vector<ExperimentConfig> parse_configs(const nlohmann::ordered_json& doc) {
  if (doc.is_object() && doc.contains("batch")) {
    if (doc.size() != 1) throw ConfigError("a batch config may only contain the key `batch`");
    if (!doc["batch"].is_array() || doc["batch"].empty()) throw ConfigError("field `batch` must be a non-empty array");
    std::vector<ExperimentConfig> out;
    for (std::size_t i = 0; i < doc["batch"].size(); ++i)
      out.push_back(parse_one(doc["batch"][i], "batch[" + std::to_string(i) + "]: "));
    return out;
  }
  return {parse_one(doc, "")};
}

std::vector<ExperimentConfig> load_configs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_configs(doc);
}

ExperimentConfig fig2_default() {
  return parse_configs(nlohmann::ordered_json::parse(
                           R"({"experiment": "fig2", "W": 2, "T_DS": [1, 0.25, 0.015625], "T_SN": 0.25, "k_max": 2})"))
      .front();
}

ExperimentConfig audit_default() {
  return parse_configs(nlohmann::ordered_json::parse(R"({"experiment": "bounds_audit", "sweep": [
      {"W": 0.8, "T": 0.125}, {"W": 2, "T": 0.125}, {"W": 2, "T": 0.25}, {"W": 1.8, "T": 0.5}]})"))
      .front();
}

}  // namespace sublimit::runner
