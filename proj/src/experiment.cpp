#include "wobble/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "wobble/errors.hpp"

namespace wobble {

namespace fs = std::filesystem;

namespace {
constexpr const char* kManifestFormat = "wobble-manifest/1";
constexpr const char* kManifestName = "manifest.txt";
}  // namespace

int default_jobs() {
  if (const char* env = std::getenv(kJobsEnv)) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

fs::path experiment_dir(const fs::path& out, const std::string& experiment) {
  return out / experiment;
}

fs::path run_path(const fs::path& out, const std::string& experiment, const std::string& condition,
                  std::uint64_t seed) {
  return experiment_dir(out, experiment) / condition / ("seed_" + std::to_string(seed) + ".runlog");
}

std::string to_string(RunOutcome o) {
  switch (o) {
    case RunOutcome::skipped: return "skipped";
    case RunOutcome::resumed: return "resumed";
    case RunOutcome::fresh: return "fresh";
  }
  return "fresh";
}

std::vector<PlannedRun> plan_runs(const ExperimentConfig& cfg, const fs::path& out) {
  cfg.validate();
  const double adult = adult_body_length(cfg.setup.robot);
  std::vector<PlannedRun> runs;
  for (const auto& cond : cfg.conditions) {
    const nlohmann::json rc = run_config(cfg, cond);
    const std::string hash = config_hash(rc);
    for (const auto seed : cfg.seeds) {
      PlannedRun run;
      run.condition = cond.name;
      run.seed = seed;
      run.path = run_path(out, cfg.name, cond.name, seed);
      run.header.experiment = cfg.name;
      run.header.condition = cond.name;
      run.header.seed = seed;
      run.header.config = rc;
      run.header.config_hash = hash;
      run.header.adult_body_length = adult;
      run.header.planned_epochs = cfg.epochs;
      run.config = RunConfig{cfg.setup, cfg.learner, cond.schedule};
      runs.push_back(std::move(run));
    }
  }
  return runs;
}

bool ExperimentResult::ok() const {
  return std::all_of(runs.begin(), runs.end(), [](const RunResult& r) { return r.error.empty(); });
}

RunOutcome execute_run(const PlannedRun& run, bool overwrite,
                       const std::function<void(const RunProgress&)>& on_progress,
                       const std::function<void(const std::string&)>& on_message) {
  const auto say = [&](const std::string& m) {
    if (on_message) on_message(run.path.string() + ": " + m);
  };
  RunHeader header = run.header;
  header.roots = init_population(run.seed, run.config.learner).roots;

  std::vector<EpochRecord> prefix;
  bool resume = false;
  if (fs::exists(run.path)) {
    std::optional<RunLog> existing;
    try {
      existing = read_runlog(run.path, true);
    } catch (const LogError& e) {
      say(std::string("unreadable log restarted (") + e.what() + ")");
    }
    if (existing) {
      if (!(existing->header == header)) {
        if (!overwrite)
          throw IntegrityError(run.path.string() +
                               " was written under a different configuration; use a new output "
                               "directory or overwrite it");
        say("replacing log written under a different configuration");
      } else if (existing->complete()) {
        return RunOutcome::skipped;
      } else {
        prefix = std::move(existing->epochs);
        resume = true;
      }
    }
  }

  std::optional<RunLogWriter> writer;
  if (resume) {
    writer.emplace(run.path, valid_prefix_bytes(run.path));
    say("resuming at epoch " + std::to_string(prefix.size()));
  } else {
    writer.emplace(run.path, header);
  }

  RunObserver observer;
  observer.on_epoch = [&](const EpochRecord& r) {
    writer->append(r);
    for (const auto& ev : r.evaluations)
      if (ev.diverged) say("epoch " + std::to_string(r.epoch) + ": a trial diverged and scored 0");
  };
  if (on_progress) observer.on_progress = on_progress;
  run_learning(run.seed, run.config.schedule, run.config.setup, run.config.learner, observer,
               std::move(prefix));
  return resume ? RunOutcome::resumed : RunOutcome::fresh;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const ExperimentOptions& options) {
  std::vector<PlannedRun> planned = plan_runs(cfg, options.out);
  if (options.condition) cfg.condition(*options.condition);  // throws for unknown names
  std::vector<PlannedRun> selected;
  for (auto& run : planned) {
    if (options.condition && run.condition != *options.condition) continue;
    if (options.seeds && std::find(options.seeds->begin(), options.seeds->end(), run.seed) ==
                             options.seeds->end())
      continue;
    selected.push_back(std::move(run));
  }
  if (selected.empty()) throw ConfigError("no runs selected");

  ExperimentResult result;
  result.runs.resize(selected.size());
  std::atomic<std::size_t> next{0};
  std::mutex report;
  const auto worker = [&] {
    for (std::size_t i = next++; i < selected.size(); i = next++) {
      const PlannedRun& run = selected[i];
      RunResult& out = result.runs[i];
      out.condition = run.condition;
      out.seed = run.seed;
      out.path = run.path;
      const auto progress = [&](const RunProgress& p) {
        if (!options.on_progress) return;
        std::lock_guard lock(report);
        options.on_progress(RunEvent{&run, p});
      };
      const auto message = [&](const std::string& m) {
        if (!options.on_message) return;
        std::lock_guard lock(report);
        options.on_message(m);
      };
      try {
        out.outcome = execute_run(run, options.overwrite, progress, message);
      } catch (const std::exception& e) {
        out.error = e.what();
      }
    }
  };
  const int jobs = std::clamp(options.jobs, 1, static_cast<int>(selected.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  const fs::path dir = experiment_dir(options.out, cfg.name);
  result.manifest = dir / kManifestName;
  write_manifest(result.manifest, cfg.name, scan_runs(dir));
  return result;
}

std::vector<ManifestEntry> scan_runs(const fs::path& dir) {
  std::vector<ManifestEntry> entries;
  if (!fs::is_directory(dir)) return entries;
  for (const auto& item : fs::recursive_directory_iterator(dir)) {
    if (!item.is_regular_file() || item.path().extension() != ".runlog") continue;
    RunLog log;
    try {
      log = read_runlog(item.path());
    } catch (const LogError&) {
      continue;
    }
    if (!log.complete()) continue;
    ManifestEntry e;
    e.sha256 = sha256_file(item.path());
    e.path = fs::relative(item.path(), dir).generic_string();
    e.condition = log.header.condition;
    e.seed = log.header.seed;
    e.epochs = static_cast<int>(log.epochs.size());
    e.config_hash = log.header.config_hash;
    entries.push_back(std::move(e));
  }
  std::sort(entries.begin(), entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });
  return entries;
}

void write_manifest(const fs::path& manifest_path, const std::string& experiment,
                    const std::vector<ManifestEntry>& entries) {
  if (manifest_path.has_parent_path()) fs::create_directories(manifest_path.parent_path());
  const fs::path tmp = manifest_path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << "# " << kManifestFormat << " experiment=" << experiment << '\n';
    for (const auto& e : entries)
      out << e.sha256 << ' ' << e.path << " condition=" << e.condition << " seed=" << e.seed
          << " epochs=" << e.epochs << " config=" << e.config_hash << '\n';
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, manifest_path);
}

std::vector<ManifestEntry> read_manifest(const fs::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw LogError("cannot open manifest " + manifest_path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind(std::string("# ") + kManifestFormat, 0) != 0)
    throw LogError(manifest_path.string() + ": not a run manifest");
  std::vector<ManifestEntry> entries;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    ManifestEntry e;
    std::string cond, seed, epochs, config;
    fields >> e.sha256 >> e.path >> cond >> seed >> epochs >> config;
    const auto value = [&](const std::string& field, const std::string& key) {
      if (field.rfind(key + "=", 0) != 0)
        throw LogError(manifest_path.string() + ":" + std::to_string(lineno) + ": expected " + key);
      return field.substr(key.size() + 1);
    };
    e.condition = value(cond, "condition");
    try {
      e.seed = std::stoull(value(seed, "seed"));
      e.epochs = std::stoi(value(epochs, "epochs"));
    } catch (const std::invalid_argument&) {
      throw LogError(manifest_path.string() + ":" + std::to_string(lineno) + ": bad number");
    }
    e.config_hash = value(config, "config");
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<std::string> RunCollection::conditions() const {
  std::vector<std::string> names;
  for (const auto& [name, runs] : by_condition) names.push_back(name);
  return names;
}

const std::vector<RunLog>& RunCollection::runs(const std::string& condition) const {
  const auto it = by_condition.find(condition);
  if (it == by_condition.end()) throw LogError("no runs for condition '" + condition + "'");
  return it->second;
}

std::vector<std::uint64_t> RunCollection::paired_seeds(const std::string& a,
                                                       const std::string& b) const {
  std::set<std::uint64_t> in_a;
  for (const auto& r : runs(a)) in_a.insert(r.header.seed);
  std::vector<std::uint64_t> both;
  for (const auto& r : runs(b))
    if (in_a.count(r.header.seed)) both.push_back(r.header.seed);
  std::sort(both.begin(), both.end());
  return both;
}

const RunLog* RunCollection::find(const std::string& condition, std::uint64_t seed) const {
  const auto it = by_condition.find(condition);
  if (it == by_condition.end()) return nullptr;
  for (const auto& r : it->second)
    if (r.header.seed == seed) return &r;
  return nullptr;
}

namespace {

// Self-consistency of one log; throws LogError.
void validate_log(const RunLog& log, const ExperimentConfig* expected) {
  if (!log.complete())
    throw LogError("incomplete run (" + std::to_string(log.epochs.size()) + " of " +
                   std::to_string(log.header.planned_epochs) + " epochs)");
  if (config_hash(log.header.config) != log.header.config_hash)
    throw LogError("config hash does not match the config echo");
  RunConfig rc;
  try {
    rc = run_config_from_json(log.header.config);
  } catch (const std::exception& e) {
    throw LogError(std::string("bad config echo: ") + e.what());
  }
  if (expected) {
    if (log.header.experiment != expected->name)
      throw LogError("belongs to experiment '" + log.header.experiment + "'");
    const Condition& cond = expected->condition(log.header.condition);
    if (config_hash(run_config(*expected, cond)) != log.header.config_hash)
      throw LogError("config mismatch with the expected experiment config");
  }
  check_runlog(log, rc.learner.kept);
}

}  // namespace

RunCollection load_runs(const fs::path& source, const ExperimentConfig* expected) {
  RunCollection out;
  std::vector<std::pair<fs::path, std::optional<ManifestEntry>>> files;
  if (fs::is_regular_file(source)) {
    const fs::path dir = source.parent_path();
    for (auto& e : read_manifest(source)) files.emplace_back(dir / e.path, std::move(e));
  } else if (fs::is_directory(source)) {
    for (const auto& item : fs::recursive_directory_iterator(source))
      if (item.is_regular_file() && item.path().extension() == ".runlog")
        files.emplace_back(item.path(), std::nullopt);
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  } else {
    throw LogError("no such manifest or directory: " + source.string());
  }
  if (files.empty()) throw LogError("no run logs found under " + source.string());

  std::map<std::string, std::string> condition_hash;
  for (const auto& [path, entry] : files) {
    try {
      if (entry && sha256_file(path) != entry->sha256) throw LogError("checksum mismatch");
      RunLog log = read_runlog(path);
      validate_log(log, expected);
      if (entry && (entry->condition != log.header.condition || entry->seed != log.header.seed))
        throw LogError("manifest entry does not match the log header");
      if (out.experiment.empty()) out.experiment = log.header.experiment;
      if (log.header.experiment != out.experiment)
        throw LogError("belongs to experiment '" + log.header.experiment + "', not '" +
                       out.experiment + "'");
      auto [it, inserted] =
          condition_hash.emplace(log.header.condition, log.header.config_hash);
      if (!inserted && it->second != log.header.config_hash)
        throw LogError("config differs from other runs of condition '" + log.header.condition + "'");
      if (out.find(log.header.condition, log.header.seed))
        throw LogError("duplicate run for seed " + std::to_string(log.header.seed));
      out.by_condition[log.header.condition].push_back(std::move(log));
    } catch (const std::exception& e) {
      out.issues.push_back({path, e.what()});
    }
  }
  for (auto& [name, runs] : out.by_condition)
    std::sort(runs.begin(), runs.end(),
              [](const RunLog& a, const RunLog& b) { return a.header.seed < b.header.seed; });
  return out;
}

Replay replay_trial(const RunLog& log, int epoch, int member) {
  if (epoch < 0 || epoch >= static_cast<int>(log.epochs.size()))
    throw LogError("epoch " + std::to_string(epoch) + " not in log");
  const EpochRecord& record = log.epochs[static_cast<std::size_t>(epoch)];
  if (member < 0 || member >= static_cast<int>(record.evaluations.size()))
    throw LogError("member " + std::to_string(member) + " not in epoch " + std::to_string(epoch));
  const RunConfig rc = run_config_from_json(log.header.config);
  const Evaluation& ev = record.evaluations[static_cast<std::size_t>(member)];
  const World body = build_starfish(rc.setup.robot, record.scales, rc.setup.environment).world;
  Replay r;
  r.trial = simulate_behavior(body, ev.genome, rc.setup.sim, rc.setup.motor);
  r.fitness = trial_fitness(r.trial, log.header.adult_body_length);
  r.logged_fitness = ev.fitness;
  return r;
}

Replay verify_replay(const RunLog& log, int epoch, int member, double tolerance) {
  Replay r = replay_trial(log, epoch, member);
  if (!(std::fabs(r.fitness - r.logged_fitness) <= tolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "replayed fitness " << r.fitness << " differs from logged " << r.logged_fitness
        << " (epoch " << epoch << ", member " << member << ")";
    throw IntegrityError(msg.str());
  }
  return r;
}

}  // namespace wobble
