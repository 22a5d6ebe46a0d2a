#pragma once

// Trial-and-error learning: each epoch evaluates the population on that
// epoch's morphology, keeps the best members unchanged and refills the
// population with Gaussian mutants of them.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "wobble/controller.hpp"
#include "wobble/morphology.hpp"
#include "wobble/physics.hpp"
#include "wobble/schedule.hpp"

namespace wobble {

enum class InitMode {
  independent,  // every initial member drawn at random
  single_seed,  // one random behavior and mutants of it
};

std::string to_string(InitMode m);
InitMode parse_init_mode(const std::string& name);

struct LearnerConfig {
  int population = 20;
  int kept = 5;
  InitMode init = InitMode::independent;
  MutationConfig mutation;

  void validate() const;
  friend bool operator==(const LearnerConfig&, const LearnerConfig&) = default;
};

/// Everything a trial needs besides the genome and the morphology scales.
struct TrialSetup {
  StarfishSpec robot;
  Environment environment;
  SimConfig sim;
  MotorConfig motor;
};

/// Members of one epoch. parents[i] indexes the previous epoch's members, or
/// the run's root genomes for epoch 0.
struct Population {
  std::vector<Genome> members;
  std::vector<int> parents;
};

struct InitialPopulation {
  std::vector<Genome> roots;
  Population population;
};

struct Evaluation {
  Genome genome;
  double fitness = 0.0;
  double displacement = 0.0;  // signed x displacement of the center of mass
  int parent = -1;
  bool diverged = false;

  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

struct EpochRecord {
  int epoch = 0;
  MorphologyScales scales;
  std::vector<Evaluation> evaluations;
  std::vector<int> kept;  // indices of the kept members, best first

  /// Index of the epoch's best trial (kept.front()).
  int best() const { return kept.front(); }
  double best_fitness() const;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

/// Deterministic per-purpose random stream: depends only on (seed, epoch, stream).
std::mt19937_64 derived_rng(std::uint64_t seed, std::int64_t epoch, std::uint64_t stream);

InitialPopulation init_population(std::uint64_t seed, const LearnerConfig& cfg);

/// Indices sorted by descending fitness, ties broken by lower index; first `kept`.
std::vector<int> select_kept(const std::vector<Evaluation>& evaluations, int kept);

/// Evaluates every member on a robot built once from `scales`. When
/// `previous` ran on the same scales, members identical to their parent reuse
/// the parent's result (bit-identical by determinism).
EpochRecord evaluate_epoch(int epoch, const Population& pop, const MorphologyScales& scales,
                           const TrialSetup& setup, double adult_length,
                           const EpochRecord* previous = nullptr);

/// Kept members first (best first, unchanged), then mutants assigned to the
/// kept parents round-robin.
Population select_and_mutate(const EpochRecord& record, std::uint64_t seed,
                             const LearnerConfig& cfg);

struct RunProgress {
  int epoch;
  double best_fitness;
  MorphologyScales scales;
};

/// Callbacks fired as the run advances; `on_epoch` receives each finished
/// record in order.
struct RunObserver {
  std::function<void(const EpochRecord&)> on_epoch;
  std::function<void(const RunProgress&)> on_progress;
};

struct LearningRun {
  double adult_length = 0.0;
  std::vector<Genome> roots;
  std::vector<EpochRecord> epochs;
};

/// Runs epochs [start, schedule.total_epochs). `resume_from` holds already
/// completed epochs (a valid log prefix) to continue from.
LearningRun run_learning(std::uint64_t seed, const WobbleSchedule& schedule,
                         const TrialSetup& setup, const LearnerConfig& cfg,
                         const RunObserver& observer = {},
                         std::vector<EpochRecord> resume_from = {});

}  // namespace wobble
