#pragma once

// Six-tentacle "starfish" soft robot built from point masses and springs.
//
// The body is a hub node surrounded by a ring holding the base rung of every
// tentacle. A tentacle is a ladder of sections; each section adds one rung
// (two nodes) joined to the previous rung by two longitudinal muscle springs
// (antagonistic, opposite signs) and two crossing diagonals. Sections 0-3 of
// tentacle t drive motor group 2t, sections 4-7 drive group 2t+1.

#include <vector>

#include "wobble/physics.hpp"

namespace wobble {

struct StarfishSpec {
  int tentacle_count = 6;
  int sections_per_tentacle = 8;
  double section_width = 0.16;
  double section_height = 0.07;  // along the tentacle axis, at size scale 1
  double body_radius = 0.22;     // hub to the midpoint of each base rung
  double node_mass = 0.05;
  double hub_mass = 0.2;
  double body_stiffness = 3500.0;
  double structural_stiffness = 3500.0;
  double muscle_stiffness = 2500.0;
  double body_damping = 1.0;
  double structural_damping = 1.0;
  double muscle_damping = 1.0;
  double orientation = 0.0;  // angle of tentacle 0 (radians, counter-clockwise from +x)
  double drop_height = 0.0;  // gap between the lowest node and the ground at build time

  void validate() const;
  friend bool operator==(const StarfishSpec&, const StarfishSpec&) = default;
};

/// Normalized morphology multipliers; the adult robot is (1, 1, 1).
struct MorphologyScales {
  double mass = 1.0;
  double stiffness = 1.0;
  double size = 1.0;

  static constexpr MorphologyScales adult() { return {}; }
  friend bool operator==(const MorphologyScales&, const MorphologyScales&) = default;
};

/// Node indices of one built tentacle, rung by rung from the body outward.
/// rungs[0] is the base rung shared with the body ring.
struct TentacleNodes {
  std::vector<std::pair<int, int>> rungs;
};

struct Starfish {
  World world;
  int hub = 0;
  std::vector<TentacleNodes> tentacles;
};

/// Builds the robot resting on the ground (lowest node at ground_y + drop_height).
/// Node masses scale with `scales.mass`, muscle stiffness with
/// `scales.stiffness`, section heights with `scales.size`. Throws ConfigError
/// on an invalid spec or non-positive scale.
Starfish build_starfish(const StarfishSpec& spec, const MorphologyScales& scales,
                        const Environment& env = {});

/// Tip-to-tip diameter across opposing tentacles of the adult build. Fitness
/// is always expressed in this unit, whatever the current morphology.
double adult_body_length(const StarfishSpec& spec);

/// Same measure taken on an arbitrary built robot.
double tip_to_tip_length(const Starfish& robot);

}  // namespace wobble
