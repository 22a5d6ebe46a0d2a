#pragma once

// Paired multi-run experiments on disk. Every condition runs the same seed
// list; each run streams its log to <out>/<experiment>/<condition>/seed_<k>.runlog
// and a manifest with checksums is written once all runs are done.
// Re-running skips complete logs whose config hash matches and continues
// partial ones from their last whole epoch.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wobble/config.hpp"
#include "wobble/runlog.hpp"
#include "wobble/trial.hpp"

namespace wobble {

/// Environment variable holding the default number of parallel runs.
inline constexpr const char* kJobsEnv = "WOBBLE_JOBS";

int default_jobs();

std::filesystem::path experiment_dir(const std::filesystem::path& out, const std::string& experiment);
std::filesystem::path run_path(const std::filesystem::path& out, const std::string& experiment,
                               const std::string& condition, std::uint64_t seed);

struct PlannedRun {
  std::string condition;
  std::uint64_t seed = 0;
  std::filesystem::path path;
  RunHeader header;  // header the finished log will carry (roots filled at run time)
  RunConfig config;
};

/// One planned run per (condition, seed), condition-major in config order.
std::vector<PlannedRun> plan_runs(const ExperimentConfig& cfg, const std::filesystem::path& out);

enum class RunOutcome { skipped, resumed, fresh };
std::string to_string(RunOutcome o);

struct RunEvent {
  const PlannedRun* run;
  RunProgress progress;
};

struct ExperimentOptions {
  std::filesystem::path out = "runs";
  int jobs = 1;
  std::optional<std::string> condition;          // restrict to one condition
  std::optional<std::vector<std::uint64_t>> seeds;  // restrict to these seeds
  bool overwrite = false;  // replace logs written under a different config
  std::function<void(const RunEvent&)> on_progress;
  std::function<void(const std::string&)> on_message;
};

struct RunResult {
  std::string condition;
  std::uint64_t seed = 0;
  std::filesystem::path path;
  RunOutcome outcome = RunOutcome::fresh;
  std::string error;  // non-empty if the run failed
};

struct ExperimentResult {
  std::vector<RunResult> runs;
  std::filesystem::path manifest;
  bool ok() const;
};

/// Executes (or resumes) a single planned run. Throws on I/O failure or when
/// an existing log belongs to a different configuration and !overwrite.
RunOutcome execute_run(const PlannedRun& run, bool overwrite,
                       const std::function<void(const RunProgress&)>& on_progress = {},
                       const std::function<void(const std::string&)>& on_message = {});

/// Runs every selected (condition, seed) pair with up to `jobs` in parallel,
/// then rewrites the manifest. Failed runs are reported in the result.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const ExperimentOptions& options);

struct ManifestEntry {
  std::string sha256;
  std::string path;  // relative to the experiment directory
  std::string condition;
  std::uint64_t seed = 0;
  int epochs = 0;
  std::string config_hash;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// Lists every complete run log under an experiment directory, sorted by path.
std::vector<ManifestEntry> scan_runs(const std::filesystem::path& experiment_directory);
void write_manifest(const std::filesystem::path& manifest_path, const std::string& experiment,
                    const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest_path);

struct LoadIssue {
  std::filesystem::path path;
  std::string message;
  friend bool operator==(const LoadIssue&, const LoadIssue&) = default;
};

/// Validated logs grouped by condition, each group sorted by seed.
struct RunCollection {
  std::string experiment;
  std::map<std::string, std::vector<RunLog>> by_condition;
  std::vector<LoadIssue> issues;

  std::vector<std::string> conditions() const;
  const std::vector<RunLog>& runs(const std::string& condition) const;
  /// Seeds present in both conditions, ascending.
  std::vector<std::uint64_t> paired_seeds(const std::string& a, const std::string& b) const;
  const RunLog* find(const std::string& condition, std::uint64_t seed) const;
  friend bool operator==(const RunCollection&, const RunCollection&) = default;
};

/// Loads from a manifest file or an experiment directory. A log that fails to
/// parse, is incomplete, has a checksum or config mismatch, or breaks the
/// structural invariants is reported in `issues`; the rest still load. With
/// `expected`, logs must carry the config hash that config assigns them.
RunCollection load_runs(const std::filesystem::path& source,
                        const ExperimentConfig* expected = nullptr);

struct Replay {
  TrialSummary trial;
  double fitness = 0.0;
  double logged_fitness = 0.0;
};

/// Re-simulates one logged trial from the header's config echo on the
/// epoch's logged morphology scales.
Replay replay_trial(const RunLog& log, int epoch, int member);

/// replay_trial, throwing IntegrityError unless the recomputed fitness is
/// within `tolerance` of the logged one.
Replay verify_replay(const RunLog& log, int epoch, int member, double tolerance = 1e-9);

}  // namespace wobble
