#pragma once

// Descriptive statistics, bootstrap intervals, the Wilcoxon signed-rank test,
// series smoothing and a 2D principal component projection.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace wobble {

/// Quantile with linear interpolation between order statistics
/// (position p * (n - 1) in the sorted sample).
double quantile(std::vector<double> values, double p);
double quantile_sorted(const std::vector<double>& sorted, double p);
double mean(const std::vector<double>& values);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

inline constexpr int kBootstrapResamples = 10000;
inline constexpr std::uint64_t kBootstrapSeed = 20230;

/// Percentile bootstrap interval of the median.
Interval bootstrap_median_ci(const std::vector<double>& values, double level,
                             int resamples = kBootstrapResamples,
                             std::uint64_t seed = kBootstrapSeed);

struct MeanBand {
  std::vector<double> mean;
  std::vector<double> low;
  std::vector<double> high;
};

/// Per-index mean across runs with a percentile bootstrap interval of the
/// mean. Runs are resampled jointly (one index draw per resample shared by all
/// positions). Every run must have the same length; throws on an empty set.
MeanBand mean_with_ci(const std::vector<std::vector<double>>& runs, double level,
                      int resamples = kBootstrapResamples, std::uint64_t seed = kBootstrapSeed);

struct BoxStats {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;   // most extreme value within q1 - 1.5 IQR
  double whisker_high = 0.0;  // most extreme value within q3 + 1.5 IQR
  std::vector<double> outliers;
  Interval median_ci;  // notch
};

/// Throws std::invalid_argument on an empty sample.
BoxStats boxplot_stats(const std::vector<double>& values, double ci_level = 0.99);

struct WilcoxonResult {
  int n = 0;               // pairs left after dropping zero differences
  double w_plus = 0.0;     // rank sum of positive differences (a - b > 0)
  double w_minus = 0.0;
  double p_two_sided = 1.0;
  double p_greater = 1.0;  // alternative: a tends to exceed b
  double p_less = 1.0;     // alternative: b tends to exceed a
  bool exact = true;
  bool all_zero = false;   // every difference was zero; p-values are 1
};

inline constexpr int kWilcoxonExactMax = 20;

/// Paired signed-rank test on a - b. Zero differences are dropped; tied
/// magnitudes get average ranks. Exact null distribution for n <= 20,
/// normal approximation with tie and continuity correction above.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b);

/// Centered moving average; the window shrinks symmetrically near the ends.
std::vector<double> moving_average(const std::vector<double>& series, int window);

/// Sample autocorrelation for lags 0..max_lag (biased estimator, r[0] = 1).
/// A constant series yields zeros beyond lag 0.
std::vector<double> autocorrelation(const std::vector<double>& series, int max_lag);

/// Lag of the highest autocorrelation after the correlation first drops
/// below zero; -1 when it never does.
int dominant_lag(const std::vector<double>& acf);

struct Pca2 {
  std::vector<std::array<double, 2>> projection;
  std::array<std::vector<double>, 2> components;  // unit vectors
  std::array<double, 2> explained{0.0, 0.0};      // fractions of total variance
  std::vector<double> center;
};

/// Covariance eigendecomposition of the mean-centered points; top two
/// components, each signed so its largest-magnitude coordinate is positive.
/// Requires at least 3 points of equal dimension. Zero variance projects
/// everything to the origin with zero explained variance.
Pca2 pca_2d(const std::vector<std::vector<double>>& points);

}  // namespace wobble
