#include "wobble/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wobble/errors.hpp"

namespace wobble {

std::string to_string(Characteristic c) {
  switch (c) {
    case Characteristic::none: return "none";
    case Characteristic::mass: return "mass";
    case Characteristic::stiffness: return "stiffness";
    case Characteristic::size: return "size";
  }
  return "none";
}

Characteristic parse_characteristic(const std::string& name) {
  if (name == "none" || name == "fixed") return Characteristic::none;
  if (name == "mass") return Characteristic::mass;
  if (name == "stiffness") return Characteristic::stiffness;
  if (name == "size") return Characteristic::size;
  throw ConfigError("unknown wobble characteristic '" + name + "'");
}

double WobbleSchedule::effective_amplitude(int epoch) const {
  if (epoch < wobble_end) return amplitude;
  if (epoch < ramp_end)
    return amplitude * static_cast<double>(ramp_end - epoch) /
           static_cast<double>(ramp_end - wobble_end);
  return 0.0;
}

double WobbleSchedule::value_at(int epoch) const {
  if (characteristic == Characteristic::none || epoch >= ramp_end) return 1.0;
  const double phase = 2.0 * std::numbers::pi * (std::fmod(static_cast<double>(epoch), period) / period);
  double v = mean + effective_amplitude(epoch) * std::sin(phase);
  if (upper_clip) v = std::min(v, *upper_clip);
  return v;
}

MorphologyScales WobbleSchedule::scale_at(int epoch) const {
  MorphologyScales s = MorphologyScales::adult();
  const double v = value_at(epoch);
  switch (characteristic) {
    case Characteristic::none: break;
    case Characteristic::mass: s.mass = v; break;
    case Characteristic::stiffness: s.stiffness = v; break;
    case Characteristic::size: s.size = v; break;
  }
  return s;
}

std::vector<std::string> WobbleSchedule::problems() const {
  std::vector<std::string> out;
  if (!(period > 0.0) || !std::isfinite(period)) out.push_back("period must be positive");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    out.push_back("amplitude must be non-negative");
  if (!std::isfinite(mean)) out.push_back("mean must be finite");
  if (upper_clip && !(*upper_clip > 0.0)) out.push_back("upper_clip must be positive");
  if (wobble_end < 0) out.push_back("wobble_end must be >= 0");
  if (ramp_end < wobble_end) out.push_back("ramp_end must be >= wobble_end");
  if (total_epochs < ramp_end) out.push_back("total_epochs must be >= ramp_end");
  if (!out.empty() || characteristic == Characteristic::none) return out;

  for (int e = 0; e < std::min(ramp_end, total_epochs); ++e) {
    const double v = value_at(e);
    if (!(v > 0.0)) {
      std::ostringstream msg;
      msg << "scale " << v << " at epoch " << e << " is not positive";
      out.push_back(msg.str());
      break;
    }
  }
  return out;
}

void WobbleSchedule::validate() const {
  const auto p = problems();
  if (p.empty()) return;
  std::string msg = "invalid wobble schedule:";
  for (const auto& s : p) msg += " " + s + ";";
  throw ConfigError(msg);
}

WobbleSchedule WobbleSchedule::from_range(Characteristic c, double low, double high,
                                          double period) {
  if (high < low) throw ConfigError("wobble range must satisfy low <= high");
  WobbleSchedule s;
  s.characteristic = c;
  s.mean = 0.5 * (low + high);
  s.amplitude = 0.5 * (high - low);
  s.period = period;
  return s;
}

}  // namespace wobble
