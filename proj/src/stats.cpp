#include "wobble/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace wobble {

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, p);
}

double mean(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean of an empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

namespace {

// Percentile interval from a sample of bootstrap statistics.
Interval percentile_interval(std::vector<double>& stats, double level) {
  std::sort(stats.begin(), stats.end());
  const double tail = (1.0 - level) / 2.0;
  return {quantile_sorted(stats, tail), quantile_sorted(stats, 1.0 - tail)};
}

}  // namespace

Interval bootstrap_median_ci(const std::vector<double>& values, double level, int resamples,
                             std::uint64_t seed) {
  if (values.empty()) throw std::invalid_argument("bootstrap of an empty sample");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
  std::vector<double> medians(static_cast<std::size_t>(resamples));
  std::vector<double> sample(values.size());
  for (auto& m : medians) {
    for (auto& s : sample) s = values[pick(rng)];
    std::sort(sample.begin(), sample.end());
    m = quantile_sorted(sample, 0.5);
  }
  return percentile_interval(medians, level);
}

MeanBand mean_with_ci(const std::vector<std::vector<double>>& runs, double level, int resamples,
                      std::uint64_t seed) {
  if (runs.empty()) throw std::invalid_argument("mean band of an empty run set");
  const std::size_t len = runs.front().size();
  for (const auto& r : runs)
    if (r.size() != len) throw std::invalid_argument("runs differ in length");
  const std::size_t n = runs.size();

  MeanBand band;
  band.mean.assign(len, 0.0);
  for (const auto& r : runs)
    for (std::size_t i = 0; i < len; ++i) band.mean[i] += r[i];
  for (auto& m : band.mean) m /= static_cast<double>(n);

  // counts[b * n + k]: how often run k appears in resample b.
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  const auto nb = static_cast<std::size_t>(resamples);
  std::vector<double> counts(nb * n, 0.0);
  for (std::size_t b = 0; b < nb; ++b)
    for (std::size_t k = 0; k < n; ++k) counts[b * n + pick(rng)] += 1.0;

  band.low.resize(len);
  band.high.resize(len);
  std::vector<double> means(nb);
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t b = 0; b < nb; ++b) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += counts[b * n + k] * runs[k][i];
      means[b] = s / static_cast<double>(n);
    }
    const Interval ci = percentile_interval(means, level);
    band.low[i] = ci.low;
    band.high[i] = ci.high;
  }
  return band;
}

BoxStats boxplot_stats(const std::vector<double>& values, double ci_level) {
  if (values.empty()) throw std::invalid_argument("box statistics of an empty sample");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  BoxStats s;
  s.n = sorted.size();
  s.mean = mean(sorted);
  s.median = quantile_sorted(sorted, 0.5);
  s.q1 = quantile_sorted(sorted, 0.25);
  s.q3 = quantile_sorted(sorted, 0.75);
  const double iqr = s.q3 - s.q1;
  const double lo_bound = s.q1 - 1.5 * iqr;
  const double hi_bound = s.q3 + 1.5 * iqr;
  s.whisker_low = s.q1;
  s.whisker_high = s.q3;
  for (double v : sorted) {
    if (v < lo_bound || v > hi_bound) {
      s.outliers.push_back(v);
      continue;
    }
    s.whisker_low = std::min(s.whisker_low, v);
    s.whisker_high = std::max(s.whisker_high, v);
  }
  s.median_ci = bootstrap_median_ci(sorted, ci_level);
  return s;
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired samples differ in length");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d != 0.0) diffs.push_back(d);
  }
  WilcoxonResult r;
  r.n = static_cast<int>(diffs.size());
  if (diffs.empty()) {
    r.all_zero = true;
    return r;
  }

  // Doubled average ranks of |d| keep tied ranks integral.
  std::vector<std::size_t> order(diffs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return std::fabs(diffs[x]) < std::fabs(diffs[y]); });
  std::vector<int> rank2(diffs.size());
  double tie_term = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && std::fabs(diffs[order[j + 1]]) == std::fabs(diffs[order[i]])) ++j;
    const int doubled = static_cast<int>(i + j + 2);  // (i+1 + j+1) = twice the average rank
    for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = doubled;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  int plus2 = 0, total2 = 0;
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    total2 += rank2[i];
    if (diffs[i] > 0) plus2 += rank2[i];
  }
  r.w_plus = plus2 / 2.0;
  r.w_minus = (total2 - plus2) / 2.0;

  const double n = static_cast<double>(r.n);
  if (r.n <= kWilcoxonExactMax) {
    // ways[s]: number of sign assignments whose positive doubled-rank sum is s.
    std::vector<double> ways(static_cast<std::size_t>(total2) + 1, 0.0);
    ways[0] = 1.0;
    for (int rk : rank2)
      for (int s = total2; s >= rk; --s) ways[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - rk)];
    const double all = std::ldexp(1.0, r.n);
    double ge = 0.0, le = 0.0;
    for (int s = 0; s <= total2; ++s) {
      if (s >= plus2) ge += ways[static_cast<std::size_t>(s)];
      if (s <= plus2) le += ways[static_cast<std::size_t>(s)];
    }
    r.exact = true;
    r.p_greater = ge / all;
    r.p_less = le / all;
  } else {
    const double mu = n * (n + 1.0) / 4.0;
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    const double sd = std::sqrt(var);
    const auto upper_tail = [](double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); };
    r.exact = false;
    r.p_greater = upper_tail((r.w_plus - mu - 0.5) / sd);
    r.p_less = 1.0 - upper_tail((r.w_plus - mu + 0.5) / sd);
  }
  r.p_two_sided = std::min(1.0, 2.0 * std::min(r.p_greater, r.p_less));
  return r;
}

std::vector<double> moving_average(const std::vector<double>& series, int window) {
  if (window < 1) throw std::invalid_argument("moving average window must be positive");
  const auto n = static_cast<long>(series.size());
  const long half = window / 2;
  // A constant stays exactly constant.
  if (std::adjacent_find(series.begin(), series.end(), std::not_equal_to<>()) == series.end())
    return series;
  std::vector<double> out(series.size());
  for (long i = 0; i < n; ++i) {
    const long h = std::min({half, i, n - 1 - i});
    double sum = 0.0;
    for (long k = i - h; k <= i + h; ++k) sum += series[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(i)] = sum / static_cast<double>(2 * h + 1);
  }
  return out;
}

std::vector<double> autocorrelation(const std::vector<double>& series, int max_lag) {
  const std::size_t n = series.size();
  if (n < 2) throw std::invalid_argument("autocorrelation needs at least two values");
  max_lag = std::min<int>(max_lag, static_cast<int>(n) - 1);
  const double m = mean(series);
  double c0 = 0.0;
  for (double v : series) c0 += (v - m) * (v - m);
  std::vector<double> r(static_cast<std::size_t>(max_lag) + 1, 0.0);
  if (c0 == 0.0) {
    r[0] = 1.0;
    return r;
  }
  for (int lag = 0; lag <= max_lag; ++lag) {
    double c = 0.0;
    for (std::size_t i = 0; i + static_cast<std::size_t>(lag) < n; ++i)
      c += (series[i] - m) * (series[i + static_cast<std::size_t>(lag)] - m);
    r[static_cast<std::size_t>(lag)] = c / c0;
  }
  return r;
}

int dominant_lag(const std::vector<double>& acf) {
  std::size_t start = 1;
  while (start < acf.size() && acf[start] >= 0.0) ++start;
  if (start >= acf.size()) return -1;
  std::size_t best = start;
  for (std::size_t i = start; i < acf.size(); ++i)
    if (acf[i] > acf[best]) best = i;
  return acf[best] > 0.0 ? static_cast<int>(best) : -1;
}

Pca2 pca_2d(const std::vector<std::vector<double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("PCA needs at least three points");
  const std::size_t dim = points.front().size();
  if (dim < 2) throw std::invalid_argument("PCA needs at least two dimensions");
  for (const auto& p : points)
    if (p.size() != dim) throw std::invalid_argument("PCA points differ in dimension");
  const auto n = static_cast<Eigen::Index>(points.size());
  const auto d = static_cast<Eigen::Index>(dim);

  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      x(i, j) = points[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  const Eigen::RowVectorXd center = x.colwise().mean();
  x.rowwise() -= center;
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);

  Pca2 out;
  out.center.assign(center.data(), center.data() + d);
  out.projection.assign(points.size(), {0.0, 0.0});
  const double total = cov.trace();
  if (!(total > 0.0)) {
    for (int c = 0; c < 2; ++c) {
      out.components[static_cast<std::size_t>(c)].assign(dim, 0.0);
      out.components[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)] = 1.0;
    }
    return out;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  for (int c = 0; c < 2; ++c) {
    const Eigen::Index col = d - 1 - c;  // eigenvalues ascend
    Eigen::VectorXd v = eig.eigenvectors().col(col);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    out.components[static_cast<std::size_t>(c)].assign(v.data(), v.data() + d);
    out.explained[static_cast<std::size_t>(c)] = std::max(0.0, eig.eigenvalues()(col)) / total;
    const Eigen::VectorXd proj = x * v;
    for (Eigen::Index i = 0; i < n; ++i) out.projection[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = proj(i);
  }
  return out;
}

}  // namespace wobble
