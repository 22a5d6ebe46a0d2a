#pragma once

#include <stdexcept>
#include <string>

namespace wobble {

/// Invalid configuration value (bad schedule, non-positive scale, malformed config file).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite physics state. `context` names the run/epoch/trial when known.
class SimulationDiverged : public std::runtime_error {
 public:
  explicit SimulationDiverged(const std::string& what, std::string context = {})
      : std::runtime_error(context.empty() ? what : what + " [" + context + "]"),
        context_(std::move(context)) {}
  const std::string& context() const noexcept { return context_; }

 private:
  std::string context_;
};

/// Structurally invalid or inconsistent run log.
class LogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Replayed result disagrees with what the log recorded.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wobble
