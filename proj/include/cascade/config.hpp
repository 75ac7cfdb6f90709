#pragma once

// JSON experiment configuration. Strict: unknown keys are rejected with a
// diagnostic naming the key, and every ArmParams / ExperimentConfig
// invariant is checked at load time.
//
// Schema (see configs/paper.json for the canonical example):
// {
//   "params": { "mu": [..], "p": [..] },
//   "horizons": [1000, ...],
//   "runs": 20,
//   "master_seed": 1234,
//   "policies": ["ec", "ae", "lcb", "ts"],
//   "checkpoint_schedule": "log" | "linear:<step>"
// }

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cascade/harness.hpp"

namespace cascade {

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& object, const char* scope,
                                std::initializer_list<const char*> allowed) {
  for (const auto& item : object.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError(std::string(scope) + ": unknown key \"" + item.key() + "\"");
    }
  }
}

inline const nlohmann::json& require_key(const nlohmann::json& object, const char* scope,
                                         const char* key) {
  auto it = object.find(key);
  if (it == object.end()) {
    throw ConfigError(std::string(scope) + ": missing key \"" + key + "\"");
  }
  return *it;
}

inline std::vector<double> probability_list(const nlohmann::json& node, const std::string& field) {
  if (!node.is_array() || node.empty()) {
    throw ConfigError(field + ": must be a nonempty array of numbers");
  }
  std::vector<double> values;
  values.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number()) {
      throw ConfigError(field + "[" + std::to_string(i) + "]: must be a number");
    }
    const double v = node[i].get<double>();
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError(field + "[" + std::to_string(i) + "]: value " + std::to_string(v) +
                        " out of range [0,1]");
    }
    values.push_back(v);
  }
  return values;
}

}  // namespace detail

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not found: " + path.string());

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config parse error in " + path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");

  detail::reject_unknown_keys(doc, "config",
                              {"params", "horizons", "runs", "master_seed", "policies",
                               "checkpoint_schedule"});

  ExperimentConfig config;

  const auto& params = detail::require_key(doc, "config", "params");
  if (!params.is_object()) throw ConfigError("params: must be an object");
  detail::reject_unknown_keys(params, "params", {"mu", "p"});
  config.params.mu = detail::probability_list(detail::require_key(params, "params", "mu"), "mu");
  config.params.p = detail::probability_list(detail::require_key(params, "params", "p"), "p");
  if (config.params.mu.size() != config.params.p.size()) {
    throw ConfigError("params: mu and p must have equal length");
  }

  const auto& horizons = detail::require_key(doc, "config", "horizons");
  if (!horizons.is_array()) throw ConfigError("horizons: must be an array");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (!horizons[i].is_number_integer()) {
      throw ConfigError("horizons[" + std::to_string(i) + "]: must be an integer");
    }
    config.horizons.push_back(horizons[i].get<std::int64_t>());
  }

  const auto& runs = detail::require_key(doc, "config", "runs");
  if (!runs.is_number_integer()) throw ConfigError("runs: must be an integer");
  config.runs = runs.get<int>();

  const auto& seed = detail::require_key(doc, "config", "master_seed");
  if (!seed.is_number_unsigned()) {
    throw ConfigError("master_seed: must be a non-negative integer");
  }
  config.master_seed = seed.get<std::uint64_t>();

  const auto& policies = detail::require_key(doc, "config", "policies");
  if (!policies.is_array()) throw ConfigError("policies: must be an array");
  for (std::size_t i = 0; i < policies.size(); ++i) {
    if (!policies[i].is_string()) {
      throw ConfigError("policies[" + std::to_string(i) + "]: must be a string");
    }
    config.policies.push_back(policies[i].get<std::string>());
  }

  const auto& schedule = detail::require_key(doc, "config", "checkpoint_schedule");
  if (!schedule.is_string()) throw ConfigError("checkpoint_schedule: must be a string");
  config.checkpoint_schedule = schedule.get<std::string>();

  config.validate();
  return config;
}

}  // namespace cascade
