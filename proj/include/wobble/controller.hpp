#pragma once

// Open-loop sinusoidal motor control: every motor group follows
// a_g * sin(2 pi t / T + phi_g), and the group's antagonistic muscle pairs
// lengthen/shorten around their base rest length accordingly.

#include <array>
#include <random>
#include <span>
#include <string>

#include "wobble/physics.hpp"

namespace wobble {

inline constexpr int kGenomeSize = 2 * kMuscleGroups;

/// 24 genes: for group g, values[2g] is the phase offset in [0, 2pi) and
/// values[2g + 1] the amplitude in [0, 1].
class Genome {
 public:
  using Values = std::array<double, kGenomeSize>;

  Genome() { values_.fill(0.0); }
  /// Throws ConfigError when an offset or amplitude is out of range.
  explicit Genome(const Values& values);

  double offset(int group) const { return values_[static_cast<std::size_t>(2 * group)]; }
  double amplitude(int group) const { return values_[static_cast<std::size_t>(2 * group + 1)]; }
  const Values& values() const { return values_; }
  static bool is_offset_gene(int index) { return index % 2 == 0; }

  /// Comma-separated, shortest round-trip decimal representation.
  std::string to_string() const;
  static Genome parse(const std::string& text);

  friend bool operator==(const Genome&, const Genome&) = default;

 private:
  Values values_;
};

struct MotorConfig {
  double motor_period = 2.0;       // seconds
  double contraction_range = 0.25; // fraction of base rest length at amplitude 1

  void validate() const;
  friend bool operator==(const MotorConfig&, const MotorConfig&) = default;
};

struct MutationConfig {
  double sigma_offset = 0.3;
  double sigma_amplitude = 0.1;

  void validate() const;
  friend bool operator==(const MutationConfig&, const MutationConfig&) = default;
};

double motor_signal(const Genome& genome, int group, double t, const MotorConfig& cfg);
std::array<double, kMuscleGroups> motor_signals(const Genome& genome, double t,
                                                const MotorConfig& cfg);

/// Updates muscle rest lengths for time t. Node state is untouched.
void apply_signals(World& world, const Genome& genome, double t, const MotorConfig& cfg);

/// Wraps an angle into [0, 2pi).
double wrap_offset(double radians);

Genome random_genome(std::mt19937_64& rng);
Genome mutate(const Genome& genome, std::mt19937_64& rng, const MutationConfig& mcfg);

}  // namespace wobble
