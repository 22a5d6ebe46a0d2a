#include "wobble/physics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "wobble/errors.hpp"

namespace wobble {

long SimConfig::steps() const {
  validate();
  return std::lround(duration / dt);
}

long SimConfig::sample_stride() const {
  return std::max(1L, std::lround(sample_interval / dt));
}

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("sim.dt must be positive");
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw ConfigError("sim.duration must be positive");
  double n = duration / dt;
  if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n))
    throw ConfigError("sim.duration must be a whole multiple of sim.dt");
  if (!(sample_interval > 0.0)) throw ConfigError("sim.sample_interval must be positive");
  if (!(max_stability_index > 0.0)) throw ConfigError("sim.max_stability_index must be positive");
  if (max_substeps < 1) throw ConfigError("sim.max_substeps must be at least 1");
}

double stability_index(const World& world, double h) {
  std::vector<double> k_sum(world.nodes.size(), 0.0);
  std::vector<double> c_sum(world.nodes.size(), 0.0);
  for (const auto& s : world.springs) {
    for (int node : {s.node_a, s.node_b}) {
      k_sum[static_cast<std::size_t>(node)] += s.stiffness;
      c_sum[static_cast<std::size_t>(node)] += s.damping;
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < world.nodes.size(); ++i) {
    const double m = world.nodes[i].mass;
    const double w2 = 2.0 * k_sum[i] / m;
    const double g = c_sum[i] / m + 0.5 * world.env.drag;
    worst = std::max(worst, w2 * h * h + 4.0 * g * h);
  }
  return worst;
}

int stable_substeps(const World& world, const SimConfig& config) {
  int n = 1;
  while (n < config.max_substeps &&
         stability_index(world, config.dt / n) > config.max_stability_index)
    ++n;
  return n;
}

void validate_world(const World& world) {
  const auto n = static_cast<int>(world.nodes.size());
  for (const auto& p : world.nodes) {
    if (!(p.mass > 0.0)) throw ConfigError("node mass must be positive");
    if (!is_finite(p.position) || !is_finite(p.velocity))
      throw ConfigError("node state must be finite");
  }
  for (const auto& s : world.springs) {
    if (s.node_a < 0 || s.node_a >= n || s.node_b < 0 || s.node_b >= n)
      throw ConfigError("spring node index out of range");
    if (s.node_a == s.node_b) throw ConfigError("spring endpoints must differ");
    if (!(s.rest_length > 0.0) || !(s.base_rest_length > 0.0))
      throw ConfigError("spring rest length must be positive");
    if (s.stiffness < 0.0 || s.damping < 0.0)
      throw ConfigError("spring stiffness and damping must be non-negative");
    if (s.is_muscle() != (s.muscle_sign != 0) || s.muscle_group >= kMuscleGroups)
      throw ConfigError("muscle group/sign bookkeeping inconsistent");
  }
}

std::pair<Vec2, Vec2> spring_force(const Spring& spring, std::span<const PointMass> nodes) {
  const PointMass& a = nodes[static_cast<std::size_t>(spring.node_a)];
  const PointMass& b = nodes[static_cast<std::size_t>(spring.node_b)];
  const Vec2 d = b.position - a.position;
  const double len = norm(d);
  if (len == 0.0) return {Vec2{}, Vec2{}};
  const Vec2 dir = d * (1.0 / len);
  const double rel_speed = dot(b.velocity - a.velocity, dir);
  const double magnitude =
      spring.stiffness * (len - spring.rest_length) + spring.damping * rel_speed;
  const Vec2 f = dir * magnitude;
  return {f, -f};
}

double spring_energy(const Spring& spring, std::span<const PointMass> nodes) {
  const Vec2 d = nodes[static_cast<std::size_t>(spring.node_b)].position -
                 nodes[static_cast<std::size_t>(spring.node_a)].position;
  const double ext = norm(d) - spring.rest_length;
  return 0.5 * spring.stiffness * ext * ext;
}

void set_muscle_rest_lengths(World& world, std::span<const double, kMuscleGroups> signals,
                             double contraction_range) {
  for (auto& s : world.springs) {
    if (!s.is_muscle()) continue;
    s.rest_length =
        s.base_rest_length *
        (1.0 + s.muscle_sign * contraction_range * signals[static_cast<std::size_t>(s.muscle_group)]);
  }
}

Simulator::Simulator(const World& world) : env_(world.env), time_(world.time) {
  const std::size_t n = world.nodes.size();
  x_.resize(n);
  y_.resize(n);
  vx_.resize(n);
  vy_.resize(n);
  mass_.resize(n);
  inv_mass_.resize(n);
  fx_.assign(n, 0.0);
  fy_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const PointMass& p = world.nodes[i];
    x_[i] = p.position.x;
    y_[i] = p.position.y;
    vx_[i] = p.velocity.x;
    vy_[i] = p.velocity.y;
    mass_[i] = p.mass;
    inv_mass_[i] = 1.0 / p.mass;
  }
  const std::size_t m = world.springs.size();
  a_.resize(m);
  b_.resize(m);
  k_.resize(m);
  c_.resize(m);
  rest_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Spring& sp = world.springs[i];
    a_[i] = static_cast<std::uint32_t>(sp.node_a);
    b_[i] = static_cast<std::uint32_t>(sp.node_b);
    k_[i] = sp.stiffness;
    c_[i] = sp.damping;
    rest_[i] = sp.rest_length;
    if (sp.is_muscle())
      muscles_.push_back({static_cast<std::uint32_t>(i), sp.muscle_group, sp.muscle_sign,
                          sp.base_rest_length});
  }
}

void Simulator::set_muscle_signals(std::span<const double, kMuscleGroups> signals,
                                   double contraction_range) {
  for (const Muscle& mu : muscles_) {
    rest_[mu.spring] =
        mu.base * (1.0 + mu.sign * contraction_range * signals[static_cast<std::size_t>(mu.group)]);
  }
}

void Simulator::step(double dt) {
  const std::size_t n = x_.size();
  std::fill(fx_.begin(), fx_.end(), 0.0);
  std::fill(fy_.begin(), fy_.end(), 0.0);

  const std::size_t m = a_.size();
  for (std::size_t i = 0; i < m; ++i) {
    const std::uint32_t a = a_[i];
    const std::uint32_t b = b_[i];
    const double dx = x_[b] - x_[a];
    const double dy = y_[b] - y_[a];
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) continue;
    const double len = std::sqrt(len2);
    const double inv = 1.0 / len;
    const double ux = dx * inv;
    const double uy = dy * inv;
    const double rel = (vx_[b] - vx_[a]) * ux + (vy_[b] - vy_[a]) * uy;
    const double mag = k_[i] * (len - rest_[i]) + c_[i] * rel;
    const double fx = ux * mag;
    const double fy = uy * mag;
    fx_[a] += fx;
    fy_[a] += fy;
    fx_[b] -= fx;
    fy_[b] -= fy;
  }

  const Vec2 g = env_.gravity;
  const double drag = env_.drag;
  const GroundContact& ground = env_.ground;
  double check = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double inv_m = inv_mass_[i];
    double ax = fx_[i] * inv_m + g.x - drag * vx_[i];
    double ay = fy_[i] * inv_m + g.y - drag * vy_[i];
    if (ground.enabled && y_[i] < ground.ground_y) {
      const double pen = ground.ground_y - y_[i];
      const double normal = std::max(0.0, ground.stiffness * pen - ground.damping * vy_[i]);
      ay += normal * inv_m;
      // Coulomb friction resolved at velocity level: the force cancels the
      // horizontal slip this step would produce, capped at mu * normal.
      const double slip_after = vx_[i] + dt * ax;
      const double cap = ground.friction * normal;
      const double stick = -slip_after * mass_[i] / dt;
      ax += std::clamp(stick, -cap, cap) * inv_m;
    }
    vx_[i] += dt * ax;
    vy_[i] += dt * ay;
    x_[i] += dt * vx_[i];
    y_[i] += dt * vy_[i];
    check += x_[i] + y_[i] + vx_[i] + vy_[i];
  }
  time_ += dt;
  if (!std::isfinite(check))
    throw SimulationDiverged("non-finite state at t=" + std::to_string(time_));
}

Vec2 Simulator::center_of_mass() const {
  Vec2 acc;
  double total = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    acc += Vec2{x_[i], y_[i]} * mass_[i];
    total += mass_[i];
  }
  return acc * (1.0 / total);
}

void Simulator::store(World& world) const {
  for (std::size_t i = 0; i < x_.size(); ++i) {
    world.nodes[i].position = {x_[i], y_[i]};
    world.nodes[i].velocity = {vx_[i], vy_[i]};
  }
  for (std::size_t i = 0; i < rest_.size(); ++i) world.springs[i].rest_length = rest_[i];
  world.time = time_;
}

void step(World& world, const SimConfig& config) {
  Simulator sim(world);
  sim.step(config.dt);
  sim.store(world);
}

void step(World& world, const SimConfig& config, std::span<const double, kMuscleGroups> signals,
          double contraction_range) {
  set_muscle_rest_lengths(world, signals, contraction_range);
  step(world, config);
}

Vec2 center_of_mass(const World& world) {
  Vec2 acc;
  double total = 0.0;
  for (const auto& p : world.nodes) {
    acc += p.position * p.mass;
    total += p.mass;
  }
  return acc * (1.0 / total);
}

Vec2 linear_momentum(const World& world) {
  Vec2 acc;
  for (const auto& p : world.nodes) acc += p.velocity * p.mass;
  return acc;
}

double kinetic_energy(const World& world) {
  double e = 0.0;
  for (const auto& p : world.nodes) e += 0.5 * p.mass * dot(p.velocity, p.velocity);
  return e;
}

double mechanical_energy(const World& world) {
  double e = kinetic_energy(world);
  for (const auto& s : world.springs) e += spring_energy(s, world.nodes);
  const auto& ground = world.env.ground;
  for (const auto& p : world.nodes) {
    e -= p.mass * dot(world.env.gravity, p.position);
    if (ground.enabled && p.position.y < ground.ground_y) {
      const double pen = ground.ground_y - p.position.y;
      e += 0.5 * ground.stiffness * pen * pen;
    }
  }
  return e;
}

}  // namespace wobble
