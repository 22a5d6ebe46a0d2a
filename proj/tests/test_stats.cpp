#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "support/oracles.hpp"
#include "wobble/stats.hpp"

using namespace wobble;

TEST_SUITE("stats") {
  TEST_CASE("quantiles interpolate linearly") {
    std::vector<double> v;
    for (int i = 1; i <= 100; ++i) v.push_back(i);
    CHECK(quantile(v, 0.5) == 50.5);
    CHECK(quantile(v, 0.25) == 25.75);
    CHECK(quantile(v, 0.75) == 75.25);
    CHECK(quantile({4.0}, 0.3) == 4.0);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> z;
    for (int i = 0; i < 100; ++i) {
      std::vector<double> s(1 + i % 17);
      for (double& x : s) x = z(rng);
      const double p = (i % 11) / 10.0;
      CHECK(quantile(s, p) == doctest::Approx(oracle::quantile(s, p)).epsilon(1e-14));
    }
    CHECK_THROWS(quantile({}, 0.5));
  }

  TEST_CASE("box statistics fixtures") {
    const auto r = oracle::stats_oracles(2, 0, 0);
    CHECK_MESSAGE(r.boxplot_fixtures_ok, r.boxplot_detail);
    std::vector<double> v;
    for (int i = 1; i <= 100; ++i) v.push_back(i);
    const auto b = boxplot_stats(v);
    CHECK(b.n == 100);
    CHECK(b.mean == 50.5);
    CHECK(b.median_ci.low < 50.5);
    CHECK(b.median_ci.high > 50.5);
    const auto flat = boxplot_stats(std::vector<double>(5, 2.0));
    CHECK(flat.median_ci.low == 2.0);
    CHECK(flat.median_ci.high == 2.0);
    CHECK_THROWS(boxplot_stats({}));
  }

  TEST_CASE("whiskers stop at the fences when points lie beyond them") {
    const auto b = boxplot_stats({-50, 1, 2, 3, 4, 5, 6, 7, 8, 9, 60, 70});
    CHECK(b.outliers.size() == 3);
    CHECK(b.whisker_low == 1.0);
    CHECK(b.whisker_high == 9.0);
  }

  TEST_CASE("wilcoxon examples") {
    const auto same = wilcoxon_signed_rank({1, 2, 3}, {1, 2, 3});
    CHECK(same.all_zero);
    CHECK(same.p_two_sided == 1.0);
    CHECK(same.p_greater == 1.0);
    const auto up = wilcoxon_signed_rank({2, 3, 4, 5, 6}, {1, 1, 1, 1, 1});
    CHECK(up.n == 5);
    CHECK(up.exact);
    CHECK(up.p_greater == 0.03125);
    CHECK(up.p_less == 1.0);
    CHECK(up.p_two_sided == 0.0625);
    CHECK(up.w_plus == 15.0);
    CHECK_THROWS(wilcoxon_signed_rank({1, 2}, {1}));
  }

  TEST_CASE("wilcoxon exact p matches enumeration") {
    const auto r = oracle::stats_oracles(3, 200, 0);
    CHECK(r.wilcoxon_cases == 200);
    CHECK(r.wilcoxon_max_error < 1e-12);
  }

  TEST_CASE("wilcoxon is invariant under a common shift") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> z;
    for (int c = 0; c < 50; ++c) {
      std::vector<double> a(12), b(12), a2(12), b2(12);
      for (std::size_t i = 0; i < 12; ++i) {
        a[i] = std::round(z(rng) * 8) / 4;  // quarter steps: exact under the shift
        b[i] = std::round(z(rng) * 8) / 4;
        a2[i] = a[i] + 3.0;
        b2[i] = b[i] + 3.0;
      }
      const auto p = wilcoxon_signed_rank(a, b);
      const auto q = wilcoxon_signed_rank(a2, b2);
      CHECK(p.p_greater == q.p_greater);
      CHECK(p.p_two_sided == q.p_two_sided);
    }
  }

  TEST_CASE("wilcoxon normal approximation above twenty pairs") {
    // 30 pairs, all positive, distinct magnitudes: z = (465 - 232.5 - 0.5) / sd.
    std::vector<double> a, b;
    for (int i = 1; i <= 30; ++i) {
      a.push_back(i);
      b.push_back(0);
    }
    const auto r = wilcoxon_signed_rank(a, b);
    CHECK_FALSE(r.exact);
    const double sd = std::sqrt(30.0 * 31 * 61 / 24);
    const double zval = (465.0 - 232.5 - 0.5) / sd;
    CHECK(r.p_greater == doctest::Approx(0.5 * std::erfc(zval / std::sqrt(2.0))).epsilon(1e-12));
    // Ties reduce the variance.
    std::vector<double> t(30, 1.0), zero(30, 0.0);
    t[0] = -1.0;
    const auto tied = wilcoxon_signed_rank(t, zero);
    const double tsd = std::sqrt(30.0 * 31 * 61 / 24 - (27000.0 - 30) / 48);
    const double tz = (tied.w_plus - 232.5 - 0.5) / tsd;
    CHECK(tied.w_plus == 30.0 * 31 / 2 - 15.5);
    CHECK(tied.p_greater == doctest::Approx(0.5 * std::erfc(tz / std::sqrt(2.0))).epsilon(1e-12));
  }

  TEST_CASE("mean band") {
    const std::vector<double> series = {1.0, 4.0, 2.5};
    const auto one = mean_with_ci({series}, 0.99);
    CHECK(one.mean == series);
    CHECK(one.low == series);
    CHECK(one.high == series);
    const auto same = mean_with_ci({series, series, series}, 0.99);
    CHECK(same.low == same.high);

    std::mt19937_64 rng(5);
    std::normal_distribution<double> z;
    std::vector<std::vector<double>> runs(20, std::vector<double>(200));
    for (auto& r : runs)
      for (double& x : r) x = z(rng);
    const auto band = mean_with_ci(runs, 0.99);
    double width = 0.0;
    for (std::size_t i = 0; i < 200; ++i) width += (band.high[i] - band.low[i]) / 200;
    const double expected = 2 * 2.5758293035489 / std::sqrt(20.0);
    CHECK(std::abs(width - expected) / expected < 0.15);
    CHECK_THROWS(mean_with_ci({}, 0.99));
    CHECK_THROWS(mean_with_ci({{1.0}, {1.0, 2.0}}, 0.99));
  }

  TEST_CASE("bootstrap is deterministic") {
    const std::vector<double> v = {3, 1, 4, 1, 5, 9, 2, 6};
    const auto a = bootstrap_median_ci(v, 0.99);
    const auto b = bootstrap_median_ci(v, 0.99);
    CHECK(a.low == b.low);
    CHECK(a.high == b.high);
  }

  TEST_CASE("moving average") {
    CHECK(moving_average(std::vector<double>(300, 0.7), 101) == std::vector<double>(300, 0.7));
    std::vector<double> impulse(301, 0.0);
    impulse[150] = 1.0;
    const auto m = moving_average(impulse, 101);
    CHECK(m[150] == doctest::Approx(1.0 / 101).epsilon(1e-14));
    CHECK(m[100] == doctest::Approx(1.0 / 101).epsilon(1e-14));
    CHECK(m[99] == 0.0);
    // Shrinking edges: index 1 averages indices 0..2.
    const auto e = moving_average({3, 6, 9, 12, 15}, 5);
    CHECK(e[0] == 3.0);
    CHECK(e[1] == 6.0);
    CHECK(e[2] == 9.0);
    CHECK_THROWS(moving_average({1.0}, 0));
  }

  TEST_CASE("autocorrelation and dominant lag") {
    std::vector<double> s;
    for (int i = 0; i < 400; ++i) s.push_back(std::sin(2 * M_PI * i / 25.0));
    const auto acf = autocorrelation(s, 75);
    CHECK(acf[0] == doctest::Approx(1.0));
    CHECK(dominant_lag(acf) == 25);
    CHECK(autocorrelation(std::vector<double>(10, 2.0), 3) == std::vector<double>{1, 0, 0, 0});
    CHECK(dominant_lag({1.0, 0.9, 0.8}) == -1);
  }

  TEST_CASE("pca basics") {
    std::vector<std::vector<double>> line;
    for (int i = 0; i < 10; ++i) {
      std::vector<double> p(24);
      for (int j = 0; j < 24; ++j) p[static_cast<std::size_t>(j)] = i * (j + 1) * 0.1;
      line.push_back(p);
    }
    const auto l = pca_2d(line);
    CHECK(l.explained[0] == doctest::Approx(1.0));
    CHECK(l.explained[1] == doctest::Approx(0.0).epsilon(1e-12));

    std::mt19937_64 rng(6);
    std::normal_distribution<double> z;
    std::vector<std::vector<double>> cloud(20000, std::vector<double>(24));
    for (auto& p : cloud)
      for (double& x : p) x = z(rng);
    const auto c = pca_2d(cloud);
    CHECK(c.explained[0] == doctest::Approx(1.0 / 24).epsilon(0.15));
    CHECK(c.explained[1] == doctest::Approx(1.0 / 24).epsilon(0.15));
    CHECK(c.explained[0] >= c.explained[1]);

    std::vector<std::vector<double>> flat(5, std::vector<double>(24, 1.5));
    const auto f = pca_2d(flat);
    CHECK(f.explained[0] == 0.0);
    for (const auto& p : f.projection) CHECK((p[0] == 0.0 && p[1] == 0.0));
    CHECK_THROWS(pca_2d({{1.0, 2.0}, {3.0, 4.0}}));
  }

  TEST_CASE("pca matches the jacobi oracle and ignores translation") {
    const auto r = oracle::stats_oracles(7, 0, 40);
    CHECK(r.pca_max_error < 1e-8);

    std::mt19937_64 rng(8);
    std::normal_distribution<double> z;
    std::vector<std::vector<double>> pts(30, std::vector<double>(24)), moved = pts;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < 24; ++j) {
        pts[i][j] = z(rng) * (1.0 + static_cast<double>(j));
        moved[i][j] = pts[i][j] + 100.0;
      }
    const auto a = pca_2d(pts);
    const auto b = pca_2d(moved);
    for (int k = 0; k < 2; ++k) {
      CHECK(a.explained[static_cast<std::size_t>(k)] >= 0.0);
      CHECK(a.explained[static_cast<std::size_t>(k)] <= 1.0);
      CHECK(std::abs(a.explained[static_cast<std::size_t>(k)] - b.explained[static_cast<std::size_t>(k)]) <
            1e-10);
    }
    CHECK(a.explained[0] >= a.explained[1]);
  }
}
