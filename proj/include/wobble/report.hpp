#pragma once

// Figure-level analysis of an experiment's run collection: performance
// curves, final-fitness box plots with paired tests against the baseline,
// search distances, timestep search distance and the PCA view of the search.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "wobble/experiment.hpp"
#include "wobble/stats.hpp"

namespace wobble {

struct AnalysisOptions {
  std::string figure;                          // fig2, fig3a, fig3b, fig3c, fig4
  std::string baseline = "fixed";
  std::vector<std::string> order;              // condition order; collection order if empty
  std::map<std::string, std::string> sweeps;   // condition -> box plot group
  double alpha = 0.01;
  double ci_level = 0.99;
  int moving_window = 101;
  bool wrap_offsets = true;
};

/// Builds options for a config: its baseline, condition order and sweeps.
AnalysisOptions analysis_options(const ExperimentConfig& cfg, const std::string& figure);

/// Final best fitness of both conditions over their shared seeds.
struct PairedFinals {
  std::vector<std::uint64_t> seeds;
  std::vector<double> a;
  std::vector<double> b;
};
PairedFinals paired_finals(const RunCollection& runs, const std::string& a, const std::string& b);

struct Comparison {
  std::string condition;
  std::string baseline;
  WilcoxonResult test;
  double median = 0.0;
  double baseline_median = 0.0;
  double median_ratio = 0.0;
};
Comparison compare_to_baseline(const RunCollection& runs, const std::string& condition,
                               const std::string& baseline);

/// Mean best-per-epoch over runs, restricted to [0, wobble_end), detrended by
/// a centered moving average one period wide, then autocorrelated up to
/// three periods. Returns the dominant lag (see dominant_lag).
struct OscillationCheck {
  int period = 0;
  int dominant_lag = -1;
  std::vector<double> acf;
};
OscillationCheck oscillation_check(const std::vector<RunLog>& runs);

/// Search distance to the final best behavior before and after the morphology
/// becomes fixed (boundary: the run's ramp_end).
struct SearchPhases {
  std::uint64_t seed = 0;
  int boundary = 0;
  double wobble_phase = 0.0;
  double fixed_phase = 0.0;
};
std::vector<SearchPhases> search_phases(const std::vector<RunLog>& runs, bool wrap = true);

/// Writes the figure's CSV/SVG/text outputs into `out_dir` and returns the
/// stats.txt text. Throws LogError when the collection holds no runs.
std::string analyze(const RunCollection& runs, const AnalysisOptions& options,
                    const std::filesystem::path& out_dir);

}  // namespace wobble
