#pragma once

#include <string>
#include <vector>

#include "wobble/controller.hpp"
#include "wobble/physics.hpp"

namespace wobble {

struct TrajectorySample {
  double t = 0.0;
  Vec2 com;
};

/// Outcome of running one genome on one body for the configured duration.
struct TrialSummary {
  Vec2 start_com;
  Vec2 end_com;
  // Sampled every SimConfig::sample_interval; first and last samples are
  // exactly start_com and end_com.
  std::vector<TrajectorySample> trajectory;
  bool diverged = false;
  std::string divergence;

  double displacement_x() const { return end_com.x - start_com.x; }
};

/// Runs one trial on a copy of `body`. Deterministic in all inputs. A
/// diverged simulation is reported through `diverged`, not by throwing.
TrialSummary simulate_behavior(const World& body, const Genome& genome, const SimConfig& sim,
                               const MotorConfig& motor);

/// |dx_com| / adult_body_length; zero for a diverged trial.
double trial_fitness(const TrialSummary& summary, double adult_body_length);

/// Writes `t,x_com,y_com` rows.
void write_trajectory_csv(const TrialSummary& summary, const std::string& path);

}  // namespace wobble
