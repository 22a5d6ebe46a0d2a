#pragma once

// 2D point-mass / spring dynamics with penalty ground contact and
// Coulomb friction, integrated with semi-implicit Euler.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wobble/vec2.hpp"

namespace wobble {

inline constexpr int kMuscleGroups = 12;

struct PointMass {
  Vec2 position;
  Vec2 velocity;
  double mass = 1.0;

  friend bool operator==(const PointMass&, const PointMass&) = default;
};

struct Spring {
  int node_a = 0;
  int node_b = 0;
  double rest_length = 1.0;
  // Rest length at zero muscle signal; equal to rest_length for structural springs.
  double base_rest_length = 1.0;
  double stiffness = 0.0;
  double damping = 0.0;
  int muscle_group = -1;  // -1 for structural springs
  int muscle_sign = 0;    // +1 / -1 for muscles, 0 otherwise

  bool is_muscle() const { return muscle_group >= 0; }
  friend bool operator==(const Spring&, const Spring&) = default;
};

/// Flat ground along y = ground_y. Penetrating nodes receive a vertical
/// spring-damper push and a Coulomb friction force opposing horizontal slip.
struct GroundContact {
  bool enabled = true;
  double ground_y = 0.0;
  double stiffness = 4000.0;
  double damping = 8.0;
  double friction = 1.0;

  friend bool operator==(const GroundContact&, const GroundContact&) = default;
};

struct Environment {
  Vec2 gravity{0.0, -9.81};
  // Mass-proportional viscous damping (1/s) applied to every node velocity.
  double drag = 2.0;
  GroundContact ground;

  friend bool operator==(const Environment&, const Environment&) = default;
};

struct World {
  std::vector<PointMass> nodes;
  std::vector<Spring> springs;
  Environment env;
  double time = 0.0;

  friend bool operator==(const World&, const World&) = default;
};

struct SimConfig {
  double dt = 0.002;
  double duration = 60.0;
  // Trajectory sampling period in seconds; rounded to a whole number of steps.
  double sample_interval = 0.1;
  // Light or stiff morphologies are integrated with dt split into substeps so
  // that stability_index() stays at or below this bound (the undamped
  // symplectic Euler limit is 4).
  double max_stability_index = 3.5;
  int max_substeps = 16;

  /// Number of integration steps in one trial. Throws ConfigError unless
  /// duration is a whole multiple of dt.
  long steps() const;
  long sample_stride() const;
  void validate() const;
};

/// Per-node Gershgorin estimate of max (w^2 h^2 + 4 g h) over the network,
/// with w^2 = 2 sum(k) / m and g = sum(c) / m + drag / 2. A damped
/// oscillator integrated with semi-implicit Euler is stable below 4.
double stability_index(const World& world, double h);

/// Smallest substep count keeping stability_index(world, dt / n) within
/// max_stability_index, capped at max_substeps.
int stable_substeps(const World& world, const SimConfig& config);

/// Checks index ranges, positive masses and rest lengths, muscle bookkeeping.
void validate_world(const World& world);

/// Damped spring law. Returns (force on node_a, force on node_b); coincident
/// endpoints produce zero force.
std::pair<Vec2, Vec2> spring_force(const Spring& spring, std::span<const PointMass> nodes);
inline std::pair<Vec2, Vec2> spring_force(const Spring& spring, const World& world) {
  return spring_force(spring, world.nodes);
}

/// Elastic potential 0.5 k (l - l0)^2 of one spring.
double spring_energy(const Spring& spring, std::span<const PointMass> nodes);

/// Sets every muscle rest length to base * (1 + sign * range * signal[group]).
void set_muscle_rest_lengths(World& world, std::span<const double, kMuscleGroups> signals,
                             double contraction_range);

/// Structure-of-arrays integrator state for one World. All stepping, in
/// step() and in whole-trial simulation, goes through this kernel.
class Simulator {
 public:
  explicit Simulator(const World& world);

  /// Muscle rest length = base * (1 + sign * range * signal[group]).
  void set_muscle_signals(std::span<const double, kMuscleGroups> signals, double contraction_range);
  /// One semi-implicit Euler step. Throws SimulationDiverged on non-finite state.
  void step(double dt);

  Vec2 center_of_mass() const;
  double time() const { return time_; }
  /// Writes node state, rest lengths and time back into `world` (same topology).
  void store(World& world) const;

 private:
  struct Muscle {
    std::uint32_t spring;
    int group;
    int sign;
    double base;
  };

  Environment env_;
  double time_;
  std::vector<double> x_, y_, vx_, vy_, mass_, inv_mass_, fx_, fy_;
  std::vector<std::uint32_t> a_, b_;
  std::vector<double> k_, c_, rest_;
  std::vector<Muscle> muscles_;
};

/// Advances the world by one dt. Muscle rest lengths are taken as currently
/// set on the springs. Throws SimulationDiverged on non-finite state.
void step(World& world, const SimConfig& config);

/// Sets muscle rest lengths from `signals` (each in [-1, 1]) then steps.
void step(World& world, const SimConfig& config, std::span<const double, kMuscleGroups> signals,
          double contraction_range);

Vec2 center_of_mass(const World& world);
Vec2 linear_momentum(const World& world);
double kinetic_energy(const World& world);
/// Kinetic + elastic + gravitational + ground-penalty energy.
double mechanical_energy(const World& world);

}  // namespace wobble
