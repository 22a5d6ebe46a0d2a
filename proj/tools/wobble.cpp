// Command-line entry point: run and sweep experiments, analyze run logs,
// plot a single run, replay a logged trial, validate a config file.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <unistd.h>
#include <vector>

#include <CLI11.hpp>

#include "wobble/analysis.hpp"
#include "wobble/config.hpp"
#include "wobble/errors.hpp"
#include "wobble/experiment.hpp"
#include "wobble/format.hpp"
#include "wobble/plot.hpp"
#include "wobble/report.hpp"

namespace fs = std::filesystem;
using namespace wobble;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

bool use_color() { return std::getenv("NO_COLOR") == nullptr && isatty(fileno(stderr)); }

void error_line(const std::string& text) {
  if (use_color())
    std::cerr << "\033[31merror:\033[0m " << text << '\n';
  else
    std::cerr << "error: " << text << '\n';
}

void print_effective(const ExperimentConfig& cfg) {
  std::cout << "# effective config\n"
            << to_json(cfg).dump(2) << '\n';
}

std::string scales_text(const MorphologyScales& s) {
  return "(" + format_double(s.mass) + ", " + format_double(s.stiffness) + ", " +
         format_double(s.size) + ")";
}

// Shared by run and sweep.
struct RunFlags {
  std::string config;
  bool desk_scale = false;
  std::vector<std::uint64_t> seeds;
  int epochs = 0;
  std::string condition;
  std::string out = "runs";
  int jobs = 0;
  bool overwrite = false;
  bool quiet = false;
  double progress_seconds = 2.0;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("config", f.config, "experiment config file (YAML)")->required();
  cmd->add_flag("--desk-scale", f.desk_scale, "apply the config's desk_scale section");
  cmd->add_option("--seed", f.seeds, "run only these seeds (replaces the seed list)");
  cmd->add_option("--epochs", f.epochs, "override the number of epochs");
  cmd->add_option("--condition", f.condition, "run a single condition");
  cmd->add_option("--out", f.out, "output root directory")->capture_default_str();
  cmd->add_option("--jobs", f.jobs,
                  std::string("parallel runs (default: $") + kJobsEnv + " or all cores)");
  cmd->add_flag("--overwrite", f.overwrite, "replace logs written under a different config");
  cmd->add_flag("--quiet", f.quiet, "only print the final summary");
  cmd->add_option("--progress-every", f.progress_seconds, "seconds between progress lines")
      ->capture_default_str();
}

ExperimentConfig load_with_overrides(const RunFlags& f) {
  ExperimentConfig cfg = load_experiment_config(f.config, f.desk_scale);
  if (!f.seeds.empty()) cfg.seeds = f.seeds;
  if (f.epochs > 0) {
    cfg.epochs = f.epochs;
    for (auto& c : cfg.conditions) c.schedule.total_epochs = f.epochs;
  }
  if (!f.condition.empty()) {
    const Condition keep = cfg.condition(f.condition);
    std::vector<Condition> conditions{keep};
    cfg.conditions = conditions;
  }
  cfg.validate();
  return cfg;
}

int execute(const ExperimentConfig& cfg, const RunFlags& f) {
  print_effective(cfg);
  ExperimentOptions opt;
  opt.out = f.out;
  opt.jobs = f.jobs > 0 ? f.jobs : default_jobs();
  opt.overwrite = f.overwrite;
  using clock = std::chrono::steady_clock;
  auto last = clock::now() - std::chrono::hours(1);
  if (!f.quiet) {
    opt.on_progress = [&](const RunEvent& e) {
      const auto now = clock::now();
      const bool final_epoch = e.progress.epoch + 1 == cfg.epochs;
      if (!final_epoch && std::chrono::duration<double>(now - last).count() < f.progress_seconds)
        return;
      last = now;
      std::cout << e.run->condition << " seed " << e.run->seed << "  epoch " << e.progress.epoch + 1
                << "/" << cfg.epochs << "  best " << format_double(e.progress.best_fitness)
                << "  scales " << scales_text(e.progress.scales) << std::endl;
    };
  }
  opt.on_message = [](const std::string& m) { std::cerr << "warning: " << m << '\n'; };
  const ExperimentResult result = run_experiment(cfg, opt);
  int failed = 0;
  for (const auto& r : result.runs) {
    if (!r.error.empty()) {
      ++failed;
      error_line(r.path.string() + ": " + r.error);
    } else if (!f.quiet) {
      std::cout << r.path.string() << "  " << to_string(r.outcome) << '\n';
    }
  }
  std::cout << "manifest " << result.manifest.string() << '\n';
  return failed == 0 ? 0 : kExitRuntime;
}

struct SweepFlags {
  std::string param;
  std::vector<double> values;
  std::string base;
  std::string name;
};

ExperimentConfig build_sweep(ExperimentConfig cfg, const SweepFlags& s) {
  const Condition* base = nullptr;
  if (!s.base.empty()) {
    base = &cfg.condition(s.base);
  } else {
    for (const auto& c : cfg.conditions)
      if (c.name != cfg.baseline) {
        base = &c;
        break;
      }
  }
  if (!base) throw ConfigError("the config has no condition to sweep from");
  std::vector<Condition> conditions;
  for (const auto& c : cfg.conditions)
    if (c.name == cfg.baseline) conditions.push_back(c);
  for (double v : s.values) {
    Condition c = *base;
    c.name = s.param + "_" + format_double(v);
    c.sweep = s.param;
    auto& sch = c.schedule;
    if (s.param == "amplitude") {
      sch.amplitude = v;
    } else if (s.param == "period") {
      sch.period = v;
    } else if (s.param == "mean") {
      sch.mean = v;
    } else if (s.param == "upper_clip") {
      sch.upper_clip = v;
    } else if (s.param == "wobble_end") {
      const int ramp = sch.ramp_end - sch.wobble_end;
      sch.wobble_end = static_cast<int>(v);
      sch.ramp_end = sch.wobble_end + ramp;
    } else {
      throw ConfigError("cannot sweep '" + s.param +
                        "' (amplitude, period, mean, upper_clip or wobble_end)");
    }
    conditions.push_back(std::move(c));
  }
  cfg.conditions = std::move(conditions);
  cfg.name = s.name.empty() ? cfg.name + "_" + s.param + "_sweep" : s.name;
  cfg.validate();
  return cfg;
}

struct AnalyzeFlags {
  std::string source;
  std::string figure;
  std::string config;
  bool desk_scale = false;
  std::string out;
  std::string baseline;
};

int analyze_command(const AnalyzeFlags& a) {
  std::optional<ExperimentConfig> cfg;
  if (!a.config.empty()) cfg = load_experiment_config(a.config, a.desk_scale);
  const RunCollection runs = load_runs(a.source, cfg ? &*cfg : nullptr);
  for (const auto& issue : runs.issues)
    std::cerr << "warning: skipped " << issue.path.string() << ": " << issue.message << '\n';
  if (runs.by_condition.empty()) throw LogError("no valid run logs under " + a.source);
  AnalysisOptions opt = cfg ? analysis_options(*cfg, a.figure) : AnalysisOptions{};
  opt.figure = a.figure;
  if (!a.baseline.empty()) opt.baseline = a.baseline;
  const fs::path src(a.source);
  const fs::path out = !a.out.empty()
                           ? fs::path(a.out)
                           : (fs::is_directory(src) ? src : src.parent_path()) / ("analysis_" + a.figure);
  std::cout << "# effective analysis: source=" << a.source << " figure=" << a.figure
            << " baseline=" << opt.baseline << " out=" << out.string()
            << (a.config.empty() ? "" : " config=" + a.config) << (a.desk_scale ? " desk-scale" : "")
            << '\n';
  std::cout << analyze(runs, opt, out);
  std::cout << "outputs written to " << out.string() << '\n';
  return 0;
}

int plot_command(const std::string& runlog, std::string out) {
  const RunLog log = read_runlog(runlog);
  if (out.empty()) out = fs::path(runlog).replace_extension(".trials.svg").string();
  ScatterPanel panel;
  panel.title = log.header.condition + " seed " + std::to_string(log.header.seed);
  panel.x_label = "epoch";
  panel.y_label = "fitness (body lengths)";
  for (const auto& r : log.epochs)
    for (const auto& ev : r.evaluations) {
      panel.x.push_back(r.epoch);
      panel.y.push_back(ev.fitness);
    }
  ScatterChart chart{"Every trial of one run", {panel}};
  write_svg(chart, out);
  const fs::path csv = fs::path(out).replace_extension(".csv");
  write_csv(chart, csv);
  std::cout << "# effective plot: runlog=" << runlog << " out=" << out << '\n';
  std::cout << "wrote " << out << " and " << csv.string() << '\n';
  return 0;
}

int replay_command(const std::string& runlog, int epoch, int member, const std::string& trajectory) {
  std::cout << "# effective replay: runlog=" << runlog << " epoch=" << epoch << " member=" << member
            << (trajectory.empty() ? "" : " trajectory=" + trajectory) << '\n';
  const RunLog log = read_runlog(runlog, true);
  const Replay r = verify_replay(log, epoch, member);
  if (!trajectory.empty()) write_trajectory_csv(r.trial, trajectory);
  std::cout << "fitness " << format_double(r.fitness) << " matches the log ("
            << format_double(r.logged_fitness) << ")" << (r.trial.diverged ? ", trial diverged" : "")
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Morphological wobbling experiments on a 2D soft starfish robot"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "run (or resume) an experiment");
  add_run_flags(run, run_flags);

  RunFlags sweep_flags;
  SweepFlags sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "run one condition across values of a schedule parameter");
  add_run_flags(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--param", sweep.param, "amplitude, period, mean, upper_clip or wobble_end")
      ->required();
  sweep_cmd->add_option("--values", sweep.values, "parameter values")->required()->delimiter(',');
  sweep_cmd->add_option("--base", sweep.base, "condition to vary (default: first non-baseline)");
  sweep_cmd->add_option("--name", sweep.name, "experiment directory name");

  AnalyzeFlags an;
  auto* analyze_cmd = app.add_subcommand("analyze", "figure statistics and plots from run logs");
  analyze_cmd->add_option("source", an.source, "experiment directory or manifest.txt")->required();
  analyze_cmd->add_option("--figure", an.figure, "fig2, fig3a, fig3b, fig3c or fig4")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3a", "fig3b", "fig3c", "fig4"}));
  analyze_cmd->add_option("--config", an.config, "config the logs must match (enables sweep grouping)");
  analyze_cmd->add_flag("--desk-scale", an.desk_scale, "apply the config's desk_scale section");
  analyze_cmd->add_option("--out", an.out, "output directory (default: <source>/analysis_<figure>)");
  analyze_cmd->add_option("--baseline", an.baseline, "condition tested against (default: fixed)");

  std::string plot_log, plot_out;
  auto* plot = app.add_subcommand("plot", "scatter every trial of one run");
  plot->add_option("runlog", plot_log, "run log")->required();
  plot->add_option("--out", plot_out, "SVG path (CSV twin written next to it)");

  std::string replay_log, trajectory;
  int epoch = 0, member = 0;
  auto* replay = app.add_subcommand("replay", "re-simulate a logged trial and check its fitness");
  replay->add_option("runlog", replay_log, "run log")->required();
  replay->add_option("--epoch", epoch, "epoch index")->required();
  replay->add_option("--member", member, "member index within the epoch")->required();
  replay->add_option("--trajectory", trajectory, "write t,x_com,y_com samples to this CSV");

  std::string validate_path;
  bool validate_desk = false;
  auto* validate = app.add_subcommand("validate-config", "check a config and print its effective form");
  validate->add_option("config", validate_path, "experiment config file")->required();
  validate->add_flag("--desk-scale", validate_desk, "apply the config's desk_scale section");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return execute(load_with_overrides(run_flags), run_flags);
    if (*sweep_cmd) return execute(build_sweep(load_with_overrides(sweep_flags), sweep), sweep_flags);
    if (*analyze_cmd) return analyze_command(an);
    if (*plot) return plot_command(plot_log, plot_out);
    if (*replay) return replay_command(replay_log, epoch, member, trajectory);
    if (*validate) {
      const ExperimentConfig cfg = load_experiment_config(validate_path, validate_desk);
      print_effective(cfg);
      std::cout << "ok: " << cfg.conditions.size() << " conditions x " << cfg.seeds.size()
                << " seeds x " << cfg.epochs << " epochs\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    error_line(e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    error_line(e.what());
    return kExitRuntime;
  }
  return 0;
}
