#pragma once

// Independent reference computations for the test suites. Nothing here calls
// the code paths it is used to check.

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "wobble/physics.hpp"
#include "wobble/schedule.hpp"

namespace oracle {

/// Piecewise closed form of a wobble schedule value, evaluated in long double.
double schedule_value(const wobble::WobbleSchedule& s, int epoch);

/// One-sided exact Wilcoxon p-values by enumerating all 2^n sign patterns of
/// the non-zero differences a - b (average ranks for ties).
struct SignedRankP {
  double greater = 1.0;
  double less = 1.0;
};
SignedRankP wilcoxon_enumerate(const std::vector<double>& a, const std::vector<double>& b);

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Eigenvalues are
/// returned in descending order with eigenvectors as columns of `vectors`.
struct EigenSystem {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // vectors[i] is the i-th eigenvector
};
EigenSystem jacobi(std::vector<std::vector<double>> a);

/// PCA projection onto the top two covariance eigenvectors, each signed so its
/// largest-magnitude coordinate is positive.
std::vector<std::array<double, 2>> pca_projection(const std::vector<std::vector<double>>& points);

/// Hand-written linear-interpolation quantile.
double quantile(std::vector<double> v, double p);

/// Random spring network with free nodes (no ground, no gravity, no drag).
wobble::World random_network(std::mt19937_64& rng, int nodes, int springs, bool damper_only);

/// Elastic force on node_a by central finite differences of 0.5 k (l - l0)^2.
wobble::Vec2 fd_force_on_a(const wobble::Spring& s, std::vector<wobble::PointMass> nodes,
                           double h);

struct PhysicsReport {
  double max_fd_rel_error = 0.0;
  double max_action_reaction = 0.0;    // |f_a + f_b|, must be exactly 0
  double momentum_drift = 0.0;         // over 10^4 steps
  double max_energy_increase = 0.0;    // per step, damper-only network
  int cases = 0;
};
/// Runs the physics invariant checks over `cases` random configurations.
PhysicsReport physics_invariants(std::uint64_t seed, int cases);

struct StatsReport {
  int wilcoxon_cases = 0;
  double wilcoxon_max_error = 0.0;
  int pca_cases = 0;
  double pca_max_error = 0.0;
  bool boxplot_fixtures_ok = false;
  std::string boxplot_detail;
};
/// Wilcoxon vs enumeration (n <= 12), PCA vs Jacobi, boxplot fixtures.
StatsReport stats_oracles(std::uint64_t seed, int wilcoxon_cases, int pca_cases);

/// Scoped temporary directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& text);

}  // namespace oracle
