#pragma once

// Experiment configuration: a YAML file mapped onto the simulation, learner
// and schedule structs. A `desk_scale` section, when present, is a partial
// config merged over the base for the scaled-down variant of an experiment.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wobble/learner.hpp"
#include "wobble/schedule.hpp"

namespace wobble {

struct Condition {
  std::string name;
  WobbleSchedule schedule;
  std::string sweep;  // box plot group; empty for conditions outside any sweep

  friend bool operator==(const Condition&, const Condition&) = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<Condition> conditions;
  std::vector<std::uint64_t> seeds;  // shared by every condition
  int epochs = 4000;
  TrialSetup setup;
  LearnerConfig learner;
  std::string baseline = "fixed";  // condition the others are tested against

  /// Throws ConfigError describing the first problem found.
  void validate() const;
  const Condition& condition(const std::string& name) const;
};

nlohmann::json to_json(const TrialSetup& setup);
nlohmann::json to_json(const LearnerConfig& cfg);
nlohmann::json to_json(const WobbleSchedule& schedule);
nlohmann::json to_json(const ExperimentConfig& cfg);

TrialSetup setup_from_json(const nlohmann::json& j);
LearnerConfig learner_from_json(const nlohmann::json& j);
WobbleSchedule schedule_from_json(const nlohmann::json& j);

/// Parses the config document (already converted from YAML). Unknown keys are
/// rejected so typos do not silently fall back to defaults.
ExperimentConfig experiment_from_json(const nlohmann::json& doc);

/// Everything that determines one run's log apart from the seed.
nlohmann::json run_config(const ExperimentConfig& cfg, const Condition& condition);
/// Hex SHA-256 of the canonical serialization of `config`.
std::string config_hash(const nlohmann::json& config);

/// Rebuilds the pieces of a run from a log header's config echo.
struct RunConfig {
  TrialSetup setup;
  LearnerConfig learner;
  WobbleSchedule schedule;
};
RunConfig run_config_from_json(const nlohmann::json& j);

nlohmann::json yaml_file_to_json(const std::filesystem::path& path);
/// Recursively overlays `patch` onto `base` (objects merge, everything else replaces).
void merge_patch(nlohmann::json& base, const nlohmann::json& patch);

/// Loads a config file; with `desk_scale`, its desk_scale section is applied first.
ExperimentConfig load_experiment_config(const std::filesystem::path& path, bool desk_scale);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace wobble
