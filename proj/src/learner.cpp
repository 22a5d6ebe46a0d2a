#include "wobble/learner.hpp"

#include <algorithm>
#include <numeric>

#include "wobble/errors.hpp"
#include "wobble/trial.hpp"

namespace wobble {

namespace {
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kMutationStream = 2;
}  // namespace

std::string to_string(InitMode m) {
  return m == InitMode::single_seed ? "single_seed" : "independent";
}

InitMode parse_init_mode(const std::string& name) {
  if (name == "independent") return InitMode::independent;
  if (name == "single_seed" || name == "single-seed") return InitMode::single_seed;
  throw ConfigError("unknown init mode '" + name + "'");
}

void LearnerConfig::validate() const {
  if (kept < 1) throw ConfigError("learner.kept must be at least 1");
  if (population <= kept) throw ConfigError("learner.population must exceed learner.kept");
  mutation.validate();
}

double EpochRecord::best_fitness() const {
  return evaluations[static_cast<std::size_t>(best())].fitness;
}

std::mt19937_64 derived_rng(std::uint64_t seed, std::int64_t epoch, std::uint64_t stream) {
  const auto e = static_cast<std::uint64_t>(epoch);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(e), static_cast<std::uint32_t>(e >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

InitialPopulation init_population(std::uint64_t seed, const LearnerConfig& cfg) {
  cfg.validate();
  auto rng = derived_rng(seed, -1, kInitStream);
  InitialPopulation out;
  auto& pop = out.population;
  if (cfg.init == InitMode::independent) {
    for (int i = 0; i < cfg.population; ++i) {
      out.roots.push_back(random_genome(rng));
      pop.members.push_back(out.roots.back());
      pop.parents.push_back(i);
    }
  } else {
    out.roots.push_back(random_genome(rng));
    pop.members.push_back(out.roots.front());
    pop.parents.push_back(0);
    for (int i = 1; i < cfg.population; ++i) {
      pop.members.push_back(mutate(out.roots.front(), rng, cfg.mutation));
      pop.parents.push_back(0);
    }
  }
  return out;
}

std::vector<int> select_kept(const std::vector<Evaluation>& evaluations, int kept) {
  std::vector<int> order(evaluations.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return evaluations[static_cast<std::size_t>(a)].fitness >
           evaluations[static_cast<std::size_t>(b)].fitness;
  });
  order.resize(static_cast<std::size_t>(std::min<int>(kept, static_cast<int>(order.size()))));
  return order;
}

EpochRecord evaluate_epoch(int epoch, const Population& pop, const MorphologyScales& scales,
                           const TrialSetup& setup, double adult_length,
                           const EpochRecord* previous) {
  const World body = build_starfish(setup.robot, scales, setup.environment).world;
  const bool reuse = previous != nullptr && previous->scales == scales;

  EpochRecord record;
  record.epoch = epoch;
  record.scales = scales;
  record.evaluations.reserve(pop.members.size());
  for (std::size_t i = 0; i < pop.members.size(); ++i) {
    Evaluation ev;
    ev.genome = pop.members[i];
    ev.parent = pop.parents[i];
    const Evaluation* cached = nullptr;
    if (reuse && ev.parent >= 0 &&
        ev.parent < static_cast<int>(previous->evaluations.size())) {
      const auto& p = previous->evaluations[static_cast<std::size_t>(ev.parent)];
      if (p.genome == ev.genome) cached = &p;
    }
    if (cached) {
      ev.fitness = cached->fitness;
      ev.displacement = cached->displacement;
      ev.diverged = cached->diverged;
    } else {
      const TrialSummary trial = simulate_behavior(body, ev.genome, setup.sim, setup.motor);
      ev.diverged = trial.diverged;
      ev.displacement = trial.diverged ? 0.0 : trial.displacement_x();
      ev.fitness = trial_fitness(trial, adult_length);
    }
    record.evaluations.push_back(std::move(ev));
  }
  return record;
}

Population select_and_mutate(const EpochRecord& record, std::uint64_t seed,
                             const LearnerConfig& cfg) {
  const std::vector<int> kept =
      record.kept.empty() ? select_kept(record.evaluations, cfg.kept) : record.kept;
  auto rng = derived_rng(seed, record.epoch, kMutationStream);
  Population next;
  for (int k : kept) {
    next.members.push_back(record.evaluations[static_cast<std::size_t>(k)].genome);
    next.parents.push_back(k);
  }
  const int mutants = cfg.population - static_cast<int>(kept.size());
  for (int j = 0; j < mutants; ++j) {
    const int parent = kept[static_cast<std::size_t>(j) % kept.size()];
    next.members.push_back(
        mutate(record.evaluations[static_cast<std::size_t>(parent)].genome, rng, cfg.mutation));
    next.parents.push_back(parent);
  }
  return next;
}

LearningRun run_learning(std::uint64_t seed, const WobbleSchedule& schedule,
                         const TrialSetup& setup, const LearnerConfig& cfg,
                         const RunObserver& observer, std::vector<EpochRecord> resume_from) {
  schedule.validate();
  cfg.validate();
  setup.sim.validate();
  setup.motor.validate();

  LearningRun run;
  run.adult_length = adult_body_length(setup.robot);
  InitialPopulation init = init_population(seed, cfg);
  run.roots = std::move(init.roots);
  run.epochs = std::move(resume_from);

  Population pop = run.epochs.empty()
                       ? std::move(init.population)
                       : select_and_mutate(run.epochs.back(), seed, cfg);
  for (int e = static_cast<int>(run.epochs.size()); e < schedule.total_epochs; ++e) {
    const EpochRecord* previous = run.epochs.empty() ? nullptr : &run.epochs.back();
    EpochRecord record =
        evaluate_epoch(e, pop, schedule.scale_at(e), setup, run.adult_length, previous);
    record.kept = select_kept(record.evaluations, cfg.kept);
    if (observer.on_epoch) observer.on_epoch(record);
    if (observer.on_progress)
      observer.on_progress(RunProgress{e, record.best_fitness(), record.scales});
    pop = select_and_mutate(record, seed, cfg);
    run.epochs.push_back(std::move(record));
  }
  return run;
}

}  // namespace wobble
