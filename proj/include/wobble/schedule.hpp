#pragma once

// Epoch-indexed morphology schedule: a sinusoid around `mean` on one
// morphological characteristic, full amplitude until wobble_end, amplitude
// ramped linearly to zero until ramp_end, adult morphology afterwards.

#include <optional>
#include <string>
#include <vector>

#include "wobble/morphology.hpp"

namespace wobble {

enum class Characteristic { none, mass, stiffness, size };

std::string to_string(Characteristic c);
/// Throws ConfigError for unknown names.
Characteristic parse_characteristic(const std::string& name);

struct WobbleSchedule {
  Characteristic characteristic = Characteristic::none;
  double mean = 1.0;
  double amplitude = 0.0;
  double period = 25.0;  // epochs
  std::optional<double> upper_clip;
  int wobble_end = 1900;
  int ramp_end = 2000;
  int total_epochs = 4000;

  /// Every violated invariant, empty when the schedule is usable.
  std::vector<std::string> problems() const;
  /// Throws ConfigError listing every problem.
  void validate() const;

  /// Amplitude in effect at `epoch` after the ramp is applied.
  double effective_amplitude(int epoch) const;
  /// Value of the wobbled characteristic at `epoch` (1.0 once fixed).
  double value_at(int epoch) const;
  MorphologyScales scale_at(int epoch) const;

  /// Schedule whose sinusoid spans [low, high].
  static WobbleSchedule from_range(Characteristic c, double low, double high, double period);

  friend bool operator==(const WobbleSchedule&, const WobbleSchedule&) = default;
};

}  // namespace wobble
