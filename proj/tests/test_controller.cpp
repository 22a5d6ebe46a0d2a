#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wobble/controller.hpp"
#include "wobble/errors.hpp"
#include "wobble/morphology.hpp"

using namespace wobble;

namespace {

Genome with_group(int g, double offset, double amp) {
  Genome::Values v{};
  v[static_cast<std::size_t>(2 * g)] = offset;
  v[static_cast<std::size_t>(2 * g + 1)] = amp;
  return Genome(v);
}

}  // namespace

TEST_SUITE("controller") {
  TEST_CASE("motor signal examples") {
    const MotorConfig cfg;
    CHECK(motor_signal(with_group(3, 1.0, 0.0), 3, 0.7, cfg) == 0.0);
    CHECK(motor_signal(with_group(0, 0.0, 1.0), 0, cfg.motor_period / 4, cfg) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(motor_signal(with_group(5, std::numbers::pi / 2, 0.5), 5, 0.0, cfg) == 0.5);
  }

  TEST_CASE("motor signal is periodic") {
    std::mt19937_64 rng(1);
    const MotorConfig cfg;
    std::uniform_real_distribution<double> t(0.0, 60.0);
    for (int i = 0; i < 1000; ++i) {
      const Genome g = random_genome(rng);
      const double s = t(rng);
      for (int k = 0; k < kMuscleGroups; ++k)
        CHECK(std::abs(motor_signal(g, k, s, cfg) - motor_signal(g, k, s + cfg.motor_period, cfg)) <
              1e-12);
    }
  }

  TEST_CASE("apply_signals sets antagonistic rest lengths") {
    auto robot = build_starfish(StarfishSpec{}, MorphologyScales::adult());
    World& w = robot.world;
    const World before = w;
    MotorConfig cfg;
    cfg.contraction_range = 0.2;

    apply_signals(w, Genome{}, 1.3, cfg);
    for (const auto& s : w.springs) CHECK(s.rest_length == s.base_rest_length);

    // Signal +1 on group 4 at t = T/4.
    apply_signals(w, with_group(4, 0.0, 1.0), cfg.motor_period / 4, cfg);
    for (const auto& s : w.springs) {
      if (s.muscle_group != 4) {
        CHECK(s.rest_length == s.base_rest_length);
        continue;
      }
      const double ratio = s.rest_length / s.base_rest_length;
      CHECK(ratio == doctest::Approx(s.muscle_sign > 0 ? 1.2 : 0.8).epsilon(1e-12));
    }
    for (std::size_t i = 0; i < w.nodes.size(); ++i) CHECK(w.nodes[i] == before.nodes[i]);
  }

  TEST_CASE("antagonistic pairs sum to twice the base and apply is idempotent") {
    auto robot = build_starfish(StarfishSpec{}, MorphologyScales::adult());
    std::mt19937_64 rng(2);
    const MotorConfig cfg;
    for (int trial = 0; trial < 50; ++trial) {
      const Genome g = random_genome(rng);
      const double t = 0.037 * trial;
      apply_signals(robot.world, g, t, cfg);
      const World once = robot.world;
      apply_signals(robot.world, g, t, cfg);
      CHECK(robot.world == once);
      // Muscles are emitted as (+1, -1) pairs per section.
      const auto& sp = robot.world.springs;
      for (std::size_t i = 0; i + 1 < sp.size(); ++i) {
        if (!(sp[i].is_muscle() && sp[i].muscle_sign == 1)) continue;
        REQUIRE(sp[i + 1].muscle_sign == -1);
        CHECK(std::abs(sp[i].rest_length + sp[i + 1].rest_length - 2 * sp[i].base_rest_length) <
              1e-12);
      }
    }
  }

  TEST_CASE("mutation with zero sigma is the identity") {
    std::mt19937_64 rng(5);
    const Genome g = random_genome(rng);
    CHECK(mutate(g, rng, MutationConfig{0.0, 0.0}) == g);
  }

  TEST_CASE("mutation keeps genomes valid") {
    std::mt19937_64 rng(6);
    const MutationConfig big{3.0, 0.8};
    Genome g = random_genome(rng);
    for (int i = 0; i < 100000; ++i) {
      g = mutate(i % 2 ? g : random_genome(rng), rng, i % 3 ? MutationConfig{} : big);
      for (int k = 0; k < kMuscleGroups; ++k) {
        REQUIRE(g.offset(k) >= 0.0);
        REQUIRE(g.offset(k) < 2 * std::numbers::pi);
        REQUIRE(g.amplitude(k) >= 0.0);
        REQUIRE(g.amplitude(k) <= 1.0);
      }
    }
  }

  TEST_CASE("offsets wrap past two pi") {
    CHECK(wrap_offset(6.2 + 0.2) == doctest::Approx(6.4 - 2 * std::numbers::pi).epsilon(1e-14));
    CHECK(wrap_offset(6.4) == doctest::Approx(0.116814692820414).epsilon(1e-12));
    CHECK(wrap_offset(-0.5) == doctest::Approx(2 * std::numbers::pi - 0.5));
    CHECK(wrap_offset(2 * std::numbers::pi) == 0.0);
  }

  TEST_CASE("genome text round trip is exact") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 1000; ++i) {
      const Genome g = random_genome(rng);
      CHECK(Genome::parse(g.to_string()) == g);
    }
  }

  TEST_CASE("genome validation") {
    Genome::Values v{};
    v[1] = 1.5;
    CHECK_THROWS_AS(Genome{v}, ConfigError);
    v[1] = 0.5;
    v[0] = 7.0;
    CHECK_THROWS_AS(Genome{v}, ConfigError);
    CHECK_THROWS(Genome::parse("1,2,3"));
  }

  TEST_CASE("random genomes are deterministic per rng state") {
    std::mt19937_64 a(77), b(77);
    CHECK(random_genome(a) == random_genome(b));
  }
}
