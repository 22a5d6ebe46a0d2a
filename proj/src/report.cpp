#include "wobble/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "wobble/analysis.hpp"
#include "wobble/errors.hpp"
#include "wobble/format.hpp"
#include "wobble/plot.hpp"

namespace wobble {

namespace fs = std::filesystem;

AnalysisOptions analysis_options(const ExperimentConfig& cfg, const std::string& figure) {
  AnalysisOptions o;
  o.figure = figure;
  o.baseline = cfg.baseline;
  for (const auto& c : cfg.conditions) {
    o.order.push_back(c.name);
    if (!c.sweep.empty()) o.sweeps[c.name] = c.sweep;
  }
  return o;
}

PairedFinals paired_finals(const RunCollection& runs, const std::string& a, const std::string& b) {
  PairedFinals out;
  out.seeds = runs.paired_seeds(a, b);
  for (const auto seed : out.seeds) {
    out.a.push_back(final_best_fitness(*runs.find(a, seed)));
    out.b.push_back(final_best_fitness(*runs.find(b, seed)));
  }
  return out;
}

Comparison compare_to_baseline(const RunCollection& runs, const std::string& condition,
                               const std::string& baseline) {
  const PairedFinals p = paired_finals(runs, condition, baseline);
  if (p.seeds.empty())
    throw LogError("conditions " + condition + " and " + baseline + " share no seeds");
  Comparison c;
  c.condition = condition;
  c.baseline = baseline;
  c.test = wilcoxon_signed_rank(p.a, p.b);
  c.median = quantile(p.a, 0.5);
  c.baseline_median = quantile(p.b, 0.5);
  c.median_ratio = c.baseline_median != 0.0 ? c.median / c.baseline_median : 0.0;
  return c;
}

namespace {

RunConfig config_of(const RunLog& log) { return run_config_from_json(log.header.config); }

std::vector<std::vector<double>> curves_of(const std::vector<RunLog>& runs) {
  std::vector<std::vector<double>> out;
  for (const auto& r : runs) out.push_back(best_per_epoch(r));
  return out;
}

std::vector<double> column_mean(const std::vector<std::vector<double>>& rows) {
  std::vector<double> m(rows.front().size(), 0.0);
  for (const auto& r : rows)
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += r[i];
  for (auto& v : m) v /= static_cast<double>(rows.size());
  return m;
}

std::vector<double> epochs_axis(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i);
  return x;
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

std::string p_text(double p) {
  std::ostringstream s;
  s << std::setprecision(3) << p;
  return s.str();
}

}  // namespace

OscillationCheck oscillation_check(const std::vector<RunLog>& runs) {
  if (runs.empty()) throw LogError("no runs to check for oscillation");
  const WobbleSchedule schedule = config_of(runs.front()).schedule;
  OscillationCheck out;
  out.period = static_cast<int>(std::lround(schedule.period));
  const std::vector<double> curve = column_mean(curves_of(runs));
  const std::size_t len = std::min<std::size_t>(curve.size(), static_cast<std::size_t>(schedule.wobble_end));
  std::vector<double> phase(curve.begin(), curve.begin() + static_cast<long>(len));
  const int window = out.period % 2 == 1 ? out.period : out.period + 1;
  const std::vector<double> trend = moving_average(phase, window);
  std::vector<double> detrended(phase.size());
  for (std::size_t i = 0; i < phase.size(); ++i) detrended[i] = phase[i] - trend[i];
  if (detrended.size() < 2) return out;
  out.acf = autocorrelation(detrended, 3 * out.period);
  out.dominant_lag = dominant_lag(out.acf);
  return out;
}

std::vector<SearchPhases> search_phases(const std::vector<RunLog>& runs, bool wrap) {
  std::vector<SearchPhases> out;
  for (const auto& r : runs) {
    const WobbleSchedule schedule = config_of(r).schedule;
    const int n = static_cast<int>(r.epochs.size());
    SearchPhases s;
    s.seed = r.header.seed;
    s.boundary = std::min(schedule.ramp_end, n);
    s.wobble_phase = search_distance(r, 0, s.boundary, std::nullopt, wrap);
    s.fixed_phase = search_distance(r, s.boundary, n, std::nullopt, wrap);
    out.push_back(s);
  }
  return out;
}

std::string analyze(const RunCollection& runs, const AnalysisOptions& options,
                    const fs::path& out_dir) {
  std::vector<std::string> conditions;
  for (const auto& name : options.order)
    if (runs.by_condition.count(name)) conditions.push_back(name);
  for (const auto& name : runs.conditions())
    if (std::find(conditions.begin(), conditions.end(), name) == conditions.end())
      conditions.push_back(name);
  if (conditions.empty()) throw LogError("no runs to analyze");
  const bool has_baseline = runs.by_condition.count(options.baseline) > 0;

  std::ostringstream stats;
  stats << "experiment " << runs.experiment << "  figure " << options.figure << '\n';
  stats << "baseline " << (has_baseline ? options.baseline : std::string("(none)"))
        << "  alpha " << options.alpha << "  interval level " << options.ci_level << "\n\n";
  for (const auto& issue : runs.issues)
    stats << "skipped " << issue.path.string() << ": " << issue.message << '\n';
  if (!runs.issues.empty()) stats << '\n';

  // summary.csv
  std::ostringstream summary;
  summary << "condition,seed,final_best_fitness,final_best_displacement\n";
  std::map<std::string, std::vector<double>> finals;
  for (const auto& c : conditions) {
    for (const auto& r : runs.runs(c)) {
      const auto& last = r.epochs.back();
      const auto& best = last.evaluations[static_cast<std::size_t>(last.best())];
      summary << csv_field(c) << ',' << r.header.seed << ',' << format_double(best.fitness) << ','
              << format_double(best.displacement) << '\n';
      finals[c].push_back(best.fitness);
    }
  }

  // Performance curves with interval bands.
  LineChart curves{"Best trial of each epoch (mean over runs)", "epoch", "fitness (body lengths)", {}};
  for (const auto& c : conditions) {
    const auto rows = curves_of(runs.runs(c));
    const std::size_t len = rows.front().size();
    if (std::any_of(rows.begin(), rows.end(), [&](const auto& r) { return r.size() != len; }))
      throw LogError("condition " + c + ": runs differ in epoch count");
    const MeanBand band = mean_with_ci(rows, options.ci_level);
    curves.series.push_back({c, epochs_axis(len), band.mean, band.low, band.high});
  }

  // Box statistics and paired tests.
  stats << "final best fitness\n";
  stats << std::left << std::setw(24) << "condition" << std::setw(5) << "n" << std::setw(10)
        << "median" << std::setw(10) << "q1" << std::setw(10) << "q3" << std::setw(22)
        << "median CI" << "outliers\n";
  std::map<std::string, BoxStats> box;
  for (const auto& c : conditions) {
    box[c] = boxplot_stats(finals[c], options.ci_level);
    const auto& s = box[c];
    stats << std::left << std::setw(24) << c << std::setw(5) << s.n << std::setw(10) << fmt(s.median)
          << std::setw(10) << fmt(s.q1) << std::setw(10) << fmt(s.q3) << std::setw(22)
          << ("[" + fmt(s.median_ci.low) + ", " + fmt(s.median_ci.high) + "]") << s.outliers.size()
          << '\n';
  }
  std::map<std::string, Comparison> comparisons;
  if (has_baseline) {
    stats << "\nWilcoxon signed-rank vs " << options.baseline << " (paired by seed)\n";
    for (const auto& c : conditions) {
      if (c == options.baseline) continue;
      const Comparison cmp = compare_to_baseline(runs, c, options.baseline);
      comparisons[c] = cmp;
      const auto& t = cmp.test;
      stats << "  " << std::left << std::setw(22) << c << " n=" << t.n << " W+=" << t.w_plus
            << " p(two-sided)=" << p_text(t.p_two_sided) << " p(greater)=" << p_text(t.p_greater)
            << (t.exact ? " exact" : " normal") << "  median ratio " << fmt(cmp.median_ratio)
            << (t.p_two_sided < options.alpha ? "  significant" : "  not significant")
            << (t.all_zero ? "  (all pairs identical)" : "") << '\n';
    }
  }

  // Oscillation signature of wobbling conditions.
  std::ostringstream osc;
  for (const auto& c : conditions) {
    const auto& rs = runs.runs(c);
    const WobbleSchedule s = config_of(rs.front()).schedule;
    if (s.characteristic == Characteristic::none || s.amplitude == 0.0 || s.wobble_end < 4) continue;
    const OscillationCheck o = oscillation_check(rs);
    osc << "  " << std::left << std::setw(22) << c << " period " << o.period << "  dominant lag "
        << o.dominant_lag << '\n';
  }
  if (!osc.str().empty())
    stats << "\nautocorrelation of the detrended mean best-of-epoch series (wobble phase)\n"
          << osc.str();

  // Box plots grouped by sweep.
  std::map<std::string, std::vector<std::string>> sweep_members;
  for (const auto& c : conditions) {
    if (c == options.baseline) continue;
    const auto it = options.sweeps.find(c);
    sweep_members[it == options.sweeps.end() ? std::string("all") : it->second].push_back(c);
  }
  if (sweep_members.empty()) sweep_members["all"] = {};
  std::vector<std::pair<std::string, BoxChart>> boxes;
  for (const auto& [sweep, members] : sweep_members) {
    BoxChart chart{"Final best fitness: " + sweep, "fitness (body lengths)", {}, {}};
    if (has_baseline) chart.groups.push_back({options.baseline, box[options.baseline]});
    for (const auto& c : members) {
      chart.groups.push_back({c, box[c]});
      if (comparisons.count(c))
        chart.notes.push_back(c + " vs " + options.baseline +
                              ": p = " + p_text(comparisons[c].test.p_two_sided));
    }
    boxes.emplace_back(sweep, std::move(chart));
  }

  // Search distances, timestep search distance and the PCA view.
  std::ostringstream search;
  search << "condition,seed,boundary_epoch,wobble_phase_distance,fixed_phase_distance\n";
  LineChart timestep{"Timestep search distance (moving average " +
                         std::to_string(options.moving_window) + " epochs, mean over runs)",
                     "epoch", "distance", {}};
  ScatterChart pca{"Search through behavior space (PCA of best-behavior ancestry)", {}};
  std::ostringstream pca_csv;
  pca_csv << "condition,seed,node,epoch,member,parent_node,best_of_epoch,pc1,pc2\n";
  stats << "\nsearch distance to the final best behavior (mean, " << options.ci_level * 100
        << "% bootstrap interval)\n";
  for (const auto& c : conditions) {
    const auto& rs = runs.runs(c);
    const auto phases = search_phases(rs, options.wrap_offsets);
    std::vector<double> first, second;
    for (const auto& p : phases) {
      search << csv_field(c) << ',' << p.seed << ',' << p.boundary << ','
             << format_double(p.wobble_phase) << ',' << format_double(p.fixed_phase) << '\n';
      first.push_back(p.wobble_phase);
      second.push_back(p.fixed_phase);
    }
    const auto ci = [&](const std::vector<double>& v) {
      std::vector<std::vector<double>> rows;
      for (double x : v) rows.push_back({x});
      const MeanBand b = mean_with_ci(rows, options.ci_level);
      return fmt(b.mean[0]) + " [" + fmt(b.low[0]) + ", " + fmt(b.high[0]) + "]";
    };
    stats << "  " << std::left << std::setw(22) << c << " before epoch " << phases.front().boundary
          << ": " << ci(first) << "  after: " << ci(second) << '\n';

    std::vector<std::vector<double>> ts;
    for (const auto& r : rs) ts.push_back(timestep_search_distance(r, options.wrap_offsets));
    if (!ts.front().empty()) {
      const std::vector<double> mean_ts = column_mean(ts);
      std::vector<double> x(mean_ts.size());
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i + 1);
      timestep.series.push_back({c, x, moving_average(mean_ts, options.moving_window), {}, {}});
    }

    // PCA of the first run of the condition (lowest seed).
    const RunLog& run = rs.front();
    const SearchTree tree = best_ancestry_tree(run);
    if (tree.nodes.size() >= 3) {
      const Pca2 p = pca_2d(tree.coordinates);
      ScatterPanel panel;
      panel.title = c + " (seed " + std::to_string(run.header.seed) + ")";
      panel.x_label = "PC1 (" + fmt(100 * p.explained[0], 3) + "%)";
      panel.y_label = "PC2 (" + fmt(100 * p.explained[1], 3) + "%)";
      const int last = static_cast<int>(run.epochs.size()) - 1;
      const int half = phases.front().boundary;
      for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
        panel.x.push_back(p.projection[k][0]);
        panel.y.push_back(p.projection[k][1]);
        if (tree.parent[k] >= 0) panel.edges.emplace_back(static_cast<std::size_t>(tree.parent[k]), k);
        if (tree.nodes[k].epoch < 0) panel.markers.push_back({k, "triangle", "start"});
        if (tree.best_of_epoch[k] == half && half <= last)
          panel.markers.push_back({k, "disk", "epoch " + std::to_string(half)});
        if (tree.best_of_epoch[k] == last) panel.markers.push_back({k, "star", "end"});
        pca_csv << csv_field(c) << ',' << run.header.seed << ',' << k << ',' << tree.nodes[k].epoch
                << ',' << tree.nodes[k].member << ',' << tree.parent[k] << ','
                << tree.best_of_epoch[k] << ',' << format_double(p.projection[k][0]) << ','
                << format_double(p.projection[k][1]) << '\n';
      }
      pca.panels.push_back(std::move(panel));
    }
  }

  fs::create_directories(out_dir);
  const auto save = [&](const std::string& name, const std::string& text) {
    std::ofstream f(out_dir / name, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + (out_dir / name).string());
    f << text;
  };
  save("summary.csv", summary.str());
  save("stats.txt", stats.str());
  write_csv(curves, out_dir / "curves.csv");
  write_svg(curves, out_dir / "curves.svg");
  for (const auto& [sweep, chart] : boxes) {
    write_csv(chart, out_dir / ("box_" + sweep + ".csv"));
    write_svg(chart, out_dir / ("box_" + sweep + ".svg"));
  }
  save("search.csv", search.str());
  write_csv(timestep, out_dir / "timestep.csv");
  write_svg(timestep, out_dir / "timestep.svg");
  save("pca.csv", pca_csv.str());
  write_svg(pca, out_dir / "pca.svg");
  return stats.str();
}

}  // namespace wobble
