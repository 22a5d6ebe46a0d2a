#pragma once

// Small experiment configs that run in well under a second per run.

#include <filesystem>
#include <string>

#include "oracles.hpp"
#include "wobble/config.hpp"

namespace fixture {

inline const char* kTinyYaml = R"(experiment: tiny
epochs: 4
seeds: [3, 5, 8]
schedule:
  wobble_end: 2
  ramp_end: 3
sim:
  duration: 0.5
conditions:
  - name: fixed
    characteristic: none
  - name: mass_wobble
    characteristic: mass
    amplitude: 0.4
    period: 2
)";

inline std::filesystem::path write_tiny(const std::filesystem::path& dir,
                                        const std::string& text = kTinyYaml) {
  const auto p = dir / "tiny.yaml";
  oracle::write_file(p, text);
  return p;
}

inline wobble::ExperimentConfig tiny_config(const std::filesystem::path& dir) {
  return wobble::load_experiment_config(write_tiny(dir), false);
}

}  // namespace fixture
