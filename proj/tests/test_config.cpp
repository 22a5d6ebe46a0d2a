#include <doctest.h>

#include <filesystem>

#include "support/fixtures.hpp"
#include "wobble/config.hpp"
#include "wobble/errors.hpp"

using namespace wobble;

namespace {

ExperimentConfig parse(const std::string& yaml, bool desk = false) {
  oracle::TempDir dir("cfg");
  return load_experiment_config(fixture::write_tiny(dir.path(), yaml), desk);
}

std::filesystem::path configs_dir() { return WOBBLE_CONFIG_DIR; }

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("tiny config parses") {
    const auto cfg = parse(fixture::kTinyYaml);
    CHECK(cfg.name == "tiny");
    CHECK(cfg.epochs == 4);
    CHECK(cfg.seeds == std::vector<std::uint64_t>{3, 5, 8});
    REQUIRE(cfg.conditions.size() == 2);
    const auto& w = cfg.condition("mass_wobble").schedule;
    CHECK(w.characteristic == Characteristic::mass);
    CHECK(w.amplitude == 0.4);
    CHECK(w.period == 2);
    CHECK(w.wobble_end == 2);
    CHECK(w.ramp_end == 3);
    CHECK(w.total_epochs == 4);
    CHECK(cfg.setup.sim.duration == 0.5);
    CHECK(cfg.setup.sim.dt == 0.002);
    CHECK(cfg.learner.population == 20);
    CHECK_THROWS_AS(cfg.condition("nope"), ConfigError);
  }

  TEST_CASE("seed ranges, ranges and clips") {
    const auto cfg = parse(R"(experiment: x
epochs: 10
seeds: {first: 4, count: 3}
schedule: {wobble_end: 5, ramp_end: 6, period: 4}
learner: {init: single_seed, mutation: {sigma_offset: 0.2}}
conditions:
  - {name: clipped, characteristic: stiffness, amplitude: 0.1, upper_clip: 1.0}
  - {name: shifted, characteristic: size, range: [0.9, 1.0]}
)");
    CHECK(cfg.seeds == std::vector<std::uint64_t>{4, 5, 6});
    CHECK(cfg.learner.init == InitMode::single_seed);
    CHECK(cfg.learner.mutation.sigma_offset == 0.2);
    CHECK(cfg.learner.mutation.sigma_amplitude == 0.1);
    const auto& c = cfg.condition("clipped").schedule;
    CHECK(c.upper_clip == 1.0);
    CHECK(c.period == 4);
    const auto& s = cfg.condition("shifted").schedule;
    CHECK(s.mean == doctest::Approx(0.95));
    CHECK(s.amplitude == doctest::Approx(0.05));
  }

  TEST_CASE("unknown keys and bad values are rejected") {
    CHECK_THROWS_AS(parse("experiment: x\nepochs: 4\nseeds: [1]\nconditons: []\n"), ConfigError);
    CHECK_THROWS_AS(parse(std::string(fixture::kTinyYaml) + "sim_typo: 1\n"), ConfigError);
    CHECK_THROWS_AS(parse(R"(experiment: x
epochs: 4
seeds: [1, 1]
schedule: {wobble_end: 2, ramp_end: 3}
conditions: [{name: a, characteristic: none}]
)"),
                    ConfigError);
    CHECK_THROWS_AS(parse(R"(experiment: x
epochs: 4
seeds: [1]
schedule: {wobble_end: 4, ramp_end: 4}
conditions: [{name: a, characteristic: mass, amplitude: 1.5, period: 4}]
)"),
                    ConfigError);
    CHECK_THROWS_AS(parse(R"(experiment: x
epochs: 4
seeds: [1]
conditions: [{name: a, characteristic: none}]
)"),
                    ConfigError);  // default ramp_end exceeds epochs
    CHECK_THROWS_AS(parse(R"(experiment: x
epochs: 4
seeds: [1]
schedule: {wobble_end: 2, ramp_end: 3}
conditions: [{name: a, characteristic: mass, range: [0.9, 1.0], amplitude: 0.1}]
)"),
                    ConfigError);
    CHECK_THROWS_AS(parse(fixture::kTinyYaml, true), ConfigError);  // no desk_scale section
    CHECK_THROWS_AS(load_experiment_config("/nonexistent/x.yaml", false), ConfigError);
  }

  TEST_CASE("desk scale section overrides the base") {
    const std::string yaml = std::string(fixture::kTinyYaml) + R"(desk_scale:
  epochs: 8
  seeds: [1]
  schedule: {wobble_end: 4, ramp_end: 6}
)";
    const auto base = parse(yaml);
    const auto desk = parse(yaml, true);
    CHECK(base.epochs == 4);
    CHECK(desk.epochs == 8);
    CHECK(desk.seeds == std::vector<std::uint64_t>{1});
    CHECK(desk.condition("mass_wobble").schedule.ramp_end == 6);
    CHECK(desk.condition("mass_wobble").schedule.amplitude == 0.4);
  }

  TEST_CASE("json echo round trips") {
    const auto cfg = parse(fixture::kTinyYaml);
    const auto j = to_json(cfg);
    const auto again = experiment_from_json(j);
    CHECK(again.name == cfg.name);
    CHECK(again.seeds == cfg.seeds);
    CHECK(again.conditions == cfg.conditions);
    CHECK(to_json(again) == j);
    for (const auto& c : cfg.conditions) {
      const auto rc = run_config(cfg, c);
      const auto back = run_config_from_json(rc);
      CHECK(back.schedule == c.schedule);
      CHECK(back.learner == cfg.learner);
      CHECK(to_json(back.setup) == to_json(cfg.setup));
      CHECK(config_hash(rc) == config_hash(run_config(again, again.condition(c.name))));
    }
    CHECK(config_hash(run_config(cfg, cfg.conditions[0])) !=
          config_hash(run_config(cfg, cfg.conditions[1])));
  }

  TEST_CASE("sha256") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("merge patch") {
    nlohmann::json base = {{"a", 1}, {"b", {{"c", 2}, {"d", 3}}}, {"l", {1, 2}}};
    merge_patch(base, {{"b", {{"c", 5}}}, {"l", {9}}, {"n", true}});
    CHECK(base == nlohmann::json({{"a", 1}, {"b", {{"c", 5}, {"d", 3}}}, {"l", {9}}, {"n", true}}));
  }

  TEST_CASE("shipped presets validate at both scales") {
    for (const char* name : {"fig2", "fig3a", "fig3b", "fig3c", "fig4"}) {
      const auto path = configs_dir() / (std::string(name) + ".yaml");
      CAPTURE(name);
      const auto full = load_experiment_config(path, false);
      const auto desk = load_experiment_config(path, true);
      CHECK(full.epochs >= desk.epochs);
      CHECK(desk.conditions.size() >= 2);
      CHECK_NOTHROW(desk.condition(desk.baseline));
    }
    const auto fig2 = load_experiment_config(configs_dir() / "fig2.yaml", true);
    CHECK(fig2.epochs == 800);
    CHECK(fig2.seeds.size() == 20);
    CHECK(fig2.setup.sim.duration == 20.0);
    const auto& w = fig2.condition("mass_a0.5_p25").schedule;
    CHECK(w.amplitude == 0.5);
    CHECK(w.period == 25);
    CHECK(w.wobble_end == 380);
    CHECK(w.ramp_end == 400);
    const auto fig4 = load_experiment_config(configs_dir() / "fig4.yaml", true);
    CHECK(fig4.learner.init == InitMode::single_seed);
    CHECK(fig4.epochs == 800);
    CHECK(fig4.seeds.size() == 20);
    for (const char* name : {"smoke", "zero_amplitude"})
      CHECK_NOTHROW(load_experiment_config(configs_dir() / (std::string(name) + ".yaml"), false));
  }
}
