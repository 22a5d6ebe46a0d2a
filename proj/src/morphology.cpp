#include "wobble/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wobble/errors.hpp"

namespace wobble {

void StarfishSpec::validate() const {
  if (tentacle_count < 2) throw ConfigError("robot.tentacle_count must be at least 2");
  if (sections_per_tentacle < 2 || sections_per_tentacle % 2 != 0)
    throw ConfigError("robot.sections_per_tentacle must be even and at least 2");
  if (tentacle_count * 2 > kMuscleGroups)
    throw ConfigError("robot.tentacle_count exceeds the available motor groups");
  for (double v : {section_width, section_height, body_radius, node_mass, hub_mass, body_stiffness,
                   structural_stiffness, muscle_stiffness}) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ConfigError("robot geometry, mass and stiffness values must be positive");
  }
  for (double v : {body_damping, structural_damping, muscle_damping, drop_height}) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ConfigError("robot damping values and drop height must be non-negative");
  }
}

namespace {

void check_scales(const MorphologyScales& s) {
  for (double v : {s.mass, s.stiffness, s.size}) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ConfigError("morphology scales must be positive and finite");
  }
}

Spring make_spring(const std::vector<PointMass>& nodes, int a, int b, double k, double c) {
  Spring s;
  s.node_a = a;
  s.node_b = b;
  s.rest_length = norm(nodes[static_cast<std::size_t>(b)].position -
                       nodes[static_cast<std::size_t>(a)].position);
  s.base_rest_length = s.rest_length;
  s.stiffness = k;
  s.damping = c;
  return s;
}

Vec2 rung_midpoint(const World& w, std::pair<int, int> rung) {
  return (w.nodes[static_cast<std::size_t>(rung.first)].position +
          w.nodes[static_cast<std::size_t>(rung.second)].position) *
         0.5;
}

}  // namespace

Starfish build_starfish(const StarfishSpec& spec, const MorphologyScales& scales,
                        const Environment& env) {
  spec.validate();
  check_scales(scales);

  Starfish robot;
  World& w = robot.world;
  w.env = env;
  const double mass = spec.node_mass * scales.mass;
  const double h = spec.section_height * scales.size;
  const double half_w = 0.5 * spec.section_width;
  const int n_sections = spec.sections_per_tentacle;
  const int half = n_sections / 2;

  auto add_node = [&](Vec2 p) {
    w.nodes.push_back(PointMass{p, Vec2{}, mass});
    return static_cast<int>(w.nodes.size()) - 1;
  };

  robot.hub = add_node(Vec2{});
  w.nodes.back().mass = spec.hub_mass * scales.mass;
  robot.tentacles.resize(static_cast<std::size_t>(spec.tentacle_count));

  // Tentacle nodes, including the base rung that belongs to the body ring.
  for (int t = 0; t < spec.tentacle_count; ++t) {
    const double angle =
        spec.orientation + 2.0 * std::numbers::pi * t / static_cast<double>(spec.tentacle_count);
    const Vec2 axis{std::cos(angle), std::sin(angle)};
    const Vec2 side{-axis.y, axis.x};
    auto& rungs = robot.tentacles[static_cast<std::size_t>(t)].rungs;
    for (int r = 0; r <= n_sections; ++r) {
      const Vec2 mid = axis * (spec.body_radius + h * r);
      const int right = add_node(mid - side * half_w);
      const int left = add_node(mid + side * half_w);
      rungs.emplace_back(right, left);
    }
  }

  // Body: ring around the hub, triangulated with spokes.
  std::vector<int> ring;
  for (const auto& tentacle : robot.tentacles) {
    ring.push_back(tentacle.rungs.front().first);
    ring.push_back(tentacle.rungs.front().second);
  }
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const int next = ring[(i + 1) % ring.size()];
    w.springs.push_back(make_spring(w.nodes, ring[i], next, spec.body_stiffness, spec.body_damping));
    w.springs.push_back(
        make_spring(w.nodes, robot.hub, ring[i], spec.body_stiffness, spec.body_damping));
  }

  for (int t = 0; t < spec.tentacle_count; ++t) {
    const auto& rungs = robot.tentacles[static_cast<std::size_t>(t)].rungs;
    for (int s = 0; s < n_sections; ++s) {
      const auto [r0, l0] = rungs[static_cast<std::size_t>(s)];
      const auto [r1, l1] = rungs[static_cast<std::size_t>(s + 1)];
      const int group = 2 * t + (s < half ? 0 : 1);
      const double k_muscle = spec.muscle_stiffness * scales.stiffness;

      Spring left = make_spring(w.nodes, l0, l1, k_muscle, spec.muscle_damping);
      left.muscle_group = group;
      left.muscle_sign = +1;
      Spring right = make_spring(w.nodes, r0, r1, k_muscle, spec.muscle_damping);
      right.muscle_group = group;
      right.muscle_sign = -1;
      w.springs.push_back(left);
      w.springs.push_back(right);

      w.springs.push_back(
          make_spring(w.nodes, r1, l1, spec.structural_stiffness, spec.structural_damping));
      w.springs.push_back(
          make_spring(w.nodes, r0, l1, spec.structural_stiffness, spec.structural_damping));
      w.springs.push_back(
          make_spring(w.nodes, l0, r1, spec.structural_stiffness, spec.structural_damping));
    }
  }

  // Place on the ground: rotate nothing further, shift so the lowest node
  // touches ground_y + drop_height and the hub sits at x = 0.
  double min_y = w.nodes.front().position.y;
  for (const auto& p : w.nodes) min_y = std::min(min_y, p.position.y);
  const Vec2 shift{0.0, env.ground.ground_y + spec.drop_height - min_y};
  for (auto& p : w.nodes) p.position += shift;

  validate_world(w);
  return robot;
}

double tip_to_tip_length(const Starfish& robot) {
  double best = 0.0;
  for (std::size_t i = 0; i < robot.tentacles.size(); ++i) {
    for (std::size_t j = i + 1; j < robot.tentacles.size(); ++j) {
      const Vec2 a = rung_midpoint(robot.world, robot.tentacles[i].rungs.back());
      const Vec2 b = rung_midpoint(robot.world, robot.tentacles[j].rungs.back());
      best = std::max(best, norm(b - a));
    }
  }
  return best;
}

double adult_body_length(const StarfishSpec& spec) {
  return tip_to_tip_length(build_starfish(spec, MorphologyScales::adult()));
}

}  // namespace wobble
