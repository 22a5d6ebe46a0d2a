#include "wobble/trial.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>

#include "wobble/errors.hpp"
#include "wobble/format.hpp"

namespace wobble {

TrialSummary simulate_behavior(const World& body, const Genome& genome, const SimConfig& sim,
                               const MotorConfig& motor) {
  const long n_steps = sim.steps();
  const long stride = sim.sample_stride();
  World world = body;
  TrialSummary out;
  out.start_com = center_of_mass(world);
  out.trajectory.reserve(static_cast<std::size_t>(n_steps / stride + 2));
  out.trajectory.push_back({world.time, out.start_com});

  const int substeps = stable_substeps(world, sim);
  const double h = sim.dt / substeps;
  Simulator kernel(world);

  // sin(wt + phi) = sin(wt) cos(phi) + cos(wt) sin(phi): one sincos per substep.
  std::array<double, kMuscleGroups> amp_cos{}, amp_sin{};
  for (int g = 0; g < kMuscleGroups; ++g) {
    amp_cos[static_cast<std::size_t>(g)] = genome.amplitude(g) * std::cos(genome.offset(g));
    amp_sin[static_cast<std::size_t>(g)] = genome.amplitude(g) * std::sin(genome.offset(g));
  }
  const double omega = 2.0 * std::numbers::pi / motor.motor_period;
  std::array<double, kMuscleGroups> signals{};

  try {
    for (long k = 0; k < n_steps; ++k) {
      for (int j = 0; j < substeps; ++j) {
        const double t = (static_cast<double>(k) + static_cast<double>(j) / substeps) * sim.dt;
        const double st = std::sin(omega * t);
        const double ct = std::cos(omega * t);
        for (std::size_t g = 0; g < signals.size(); ++g)
          signals[g] = st * amp_cos[g] + ct * amp_sin[g];
        kernel.set_muscle_signals(signals, motor.contraction_range);
        kernel.step(h);
      }
      if ((k + 1) % stride == 0 || k + 1 == n_steps)
        out.trajectory.push_back({kernel.time(), kernel.center_of_mass()});
    }
  } catch (const SimulationDiverged& e) {
    out.diverged = true;
    out.divergence = e.what();
    out.end_com = out.start_com;
    return out;
  }
  out.end_com = out.trajectory.back().com;
  return out;
}

double trial_fitness(const TrialSummary& summary, double adult_body_length) {
  if (summary.diverged) return 0.0;
  return std::abs(summary.displacement_x()) / adult_body_length;
}

void write_trajectory_csv(const TrialSummary& summary, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trajectory to " + path);
  out << "t,x_com,y_com\n";
  for (const auto& s : summary.trajectory)
    out << format_double(s.t) << ',' << format_double(s.com.x) << ',' << format_double(s.com.y)
        << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace wobble
