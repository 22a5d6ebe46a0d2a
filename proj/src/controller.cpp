#include "wobble/controller.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "wobble/errors.hpp"

namespace wobble {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Genome::Genome(const Values& values) : values_(values) {
  for (int i = 0; i < kGenomeSize; ++i) {
    const double v = values_[static_cast<std::size_t>(i)];
    if (is_offset_gene(i)) {
      if (!(v >= 0.0 && v < kTwoPi)) throw ConfigError("genome offset outside [0, 2pi)");
    } else if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError("genome amplitude outside [0, 1]");
    }
  }
}

std::string Genome::to_string() const {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) out.push_back(',');
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, values_[i]);
    out.append(buf, end);
  }
  return out;
}

Genome Genome::parse(const std::string& text) {
  Values values{};
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    while (p < end && *p == ' ') ++p;
    auto [next, ec] = std::from_chars(p, end, values[i]);
    if (ec != std::errc{}) throw ConfigError("malformed genome: '" + text + "'");
    p = next;
    while (p < end && *p == ' ') ++p;
    if (i + 1 < values.size()) {
      if (p == end || *p != ',') throw ConfigError("genome needs 24 comma-separated values");
      ++p;
    }
  }
  if (p != end) throw ConfigError("trailing characters after 24 genome values");
  return Genome(values);
}

void MotorConfig::validate() const {
  if (!(motor_period > 0.0)) throw ConfigError("motor.period must be positive");
  if (!(contraction_range > 0.0 && contraction_range < 1.0))
    throw ConfigError("motor.contraction_range must lie in (0, 1)");
}

void MutationConfig::validate() const {
  if (!(sigma_offset >= 0.0) || !(sigma_amplitude >= 0.0))
    throw ConfigError("mutation sigmas must be non-negative");
}

double motor_signal(const Genome& genome, int group, double t, const MotorConfig& cfg) {
  return genome.amplitude(group) * std::sin(kTwoPi * t / cfg.motor_period + genome.offset(group));
}

std::array<double, kMuscleGroups> motor_signals(const Genome& genome, double t,
                                                const MotorConfig& cfg) {
  std::array<double, kMuscleGroups> s{};
  for (int g = 0; g < kMuscleGroups; ++g)
    s[static_cast<std::size_t>(g)] = motor_signal(genome, g, t, cfg);
  return s;
}

void apply_signals(World& world, const Genome& genome, double t, const MotorConfig& cfg) {
  const auto signals = motor_signals(genome, t, cfg);
  set_muscle_rest_lengths(world, signals, cfg.contraction_range);
}

double wrap_offset(double radians) {
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

Genome random_genome(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Genome::Values v{};
  for (int i = 0; i < kGenomeSize; ++i) {
    const double u = unit(rng);
    v[static_cast<std::size_t>(i)] = Genome::is_offset_gene(i) ? wrap_offset(u * kTwoPi) : u;
  }
  return Genome(v);
}

Genome mutate(const Genome& genome, std::mt19937_64& rng, const MutationConfig& mcfg) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Genome::Values v = genome.values();
  for (int i = 0; i < kGenomeSize; ++i) {
    auto& x = v[static_cast<std::size_t>(i)];
    const double z = gauss(rng);
    if (Genome::is_offset_gene(i)) {
      x = wrap_offset(x + mcfg.sigma_offset * z);
    } else {
      x = std::clamp(x + mcfg.sigma_amplitude * z, 0.0, 1.0);
    }
  }
  return Genome(v);
}

}  // namespace wobble
