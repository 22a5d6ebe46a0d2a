#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "wobble/controller.hpp"
#include "wobble/errors.hpp"
#include "wobble/morphology.hpp"
#include "wobble/physics.hpp"
#include "wobble/trial.hpp"

using namespace wobble;

namespace {

World two_nodes(Vec2 a, Vec2 b, double k, double rest) {
  World w;
  w.env.gravity = {0.0, 0.0};
  w.env.drag = 0.0;
  w.env.ground.enabled = false;
  w.nodes = {{a, {}, 1.0}, {b, {}, 1.0}};
  Spring s;
  s.node_a = 0;
  s.node_b = 1;
  s.rest_length = s.base_rest_length = rest;
  s.stiffness = k;
  w.springs = {s};
  return w;
}

}  // namespace

TEST_SUITE("physics") {
  TEST_CASE("spring at rest length exerts no force") {
    World w = two_nodes({0, 0}, {1.5, 0}, 7.0, 1.5);
    const auto [fa, fb] = spring_force(w.springs[0], w);
    CHECK(fa == Vec2{0, 0});
    CHECK(fb == Vec2{0, 0});
  }

  TEST_CASE("unit extension along x") {
    World w = two_nodes({0, 0}, {2, 0}, 1.0, 1.0);
    const auto [fa, fb] = spring_force(w.springs[0], w);
    CHECK(fa == Vec2{1, 0});
    CHECK(fb == Vec2{-1, 0});
  }

  TEST_CASE("damping acts on relative speed along the axis") {
    World w = two_nodes({0, 0}, {1, 0}, 0.0, 1.0);
    w.springs[0].damping = 3.0;
    w.nodes[1].velocity = {0.5, 9.0};  // only the x part is along the axis
    const auto [fa, fb] = spring_force(w.springs[0], w);
    CHECK(fa.x == doctest::Approx(1.5));
    CHECK(fa.y == 0.0);
    CHECK(fb.x == -fa.x);
  }

  TEST_CASE("coincident endpoints give zero force") {
    World w = two_nodes({1, 1}, {1, 1}, 10.0, 1.0);
    const auto [fa, fb] = spring_force(w.springs[0], w);
    CHECK(fa == Vec2{0, 0});
    CHECK(fb == Vec2{0, 0});
  }

  TEST_CASE("forces match finite differences of the elastic potential") {
    std::mt19937_64 rng(11);
    for (int c = 0; c < 50; ++c) {
      World w = oracle::random_network(rng, 5, 8, false);
      for (auto& p : w.nodes) p.velocity = {};
      for (const auto& s : w.springs) {
        const auto [fa, fb] = spring_force(s, w);
        const Vec2 ref = oracle::fd_force_on_a(s, w.nodes, 1e-6);
        const double rel = norm(fa - ref) / std::max(norm(ref), 1e-12);
        CHECK(rel < 1e-6);
        CHECK(fa.x == -fb.x);
        CHECK(fa.y == -fb.y);
      }
    }
  }

  TEST_CASE("ballistic step") {
    World w;
    w.env.ground.enabled = false;
    w.env.drag = 0.0;
    w.nodes = {{{0, 5}, {1, 2}, 0.3}};
    SimConfig cfg;
    step(w, cfg);
    CHECK(w.nodes[0].velocity.y == 2.0 - 9.81 * cfg.dt);
    CHECK(w.nodes[0].velocity.x == 1.0);
    CHECK(w.time == cfg.dt);
  }

  TEST_CASE("two-node spring conserves momentum in one step") {
    World w = two_nodes({0, 0}, {1.3, 0.4}, 50.0, 1.0);
    w.nodes[0].velocity = {0.2, -0.1};
    w.nodes[1].mass = 2.5;
    const Vec2 p0 = linear_momentum(w);
    step(w, SimConfig{});
    const Vec2 p1 = linear_momentum(w);
    CHECK(std::abs(p1.x - p0.x) < 1e-10);
    CHECK(std::abs(p1.y - p0.y) < 1e-10);
  }

  TEST_CASE("isolated network conserves momentum over 10^4 steps") {
    const auto r = oracle::physics_invariants(5, 3);
    CHECK(r.momentum_drift < 1e-8);
    CHECK(r.max_action_reaction == 0.0);
    CHECK(r.max_fd_rel_error < 1e-6);
    CHECK(r.max_energy_increase <= 1e-9);
  }

  TEST_CASE("spring network with damping loses energy overall") {
    std::mt19937_64 rng(3);
    World w = oracle::random_network(rng, 6, 12, false);
    const double e0 = mechanical_energy(w);
    for (int i = 0; i < 20000; ++i) step(w, SimConfig{});
    CHECK(mechanical_energy(w) < e0);
  }

  TEST_CASE("node resting on the ground stays near ground level") {
    World w;
    w.env.drag = 0.0;
    w.nodes = {{{0, 0}, {}, 0.05}};
    const double sag = w.nodes[0].mass * 9.81 / w.env.ground.stiffness;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      step(w, SimConfig{});
      worst = std::max(worst, std::abs(w.nodes[0].position.y - w.env.ground.ground_y));
    }
    CHECK(worst <= 2.0 * sag + 1e-9);
    CHECK(w.nodes[0].position.y < 0.0);
  }

  TEST_CASE("friction stops a sliding node") {
    World w;
    w.env.drag = 0.0;
    w.nodes = {{{0, 0}, {0.5, 0}, 0.05}};
    for (int i = 0; i < 1000; ++i) step(w, SimConfig{});
    CHECK(std::abs(w.nodes[0].velocity.x) < 1e-12);
    CHECK(w.nodes[0].position.x > 0.0);
  }

  TEST_CASE("center of mass") {
    World w;
    w.nodes = {{{3, 1}, {}, 1.0}};
    CHECK(center_of_mass(w) == Vec2{3, 1});
    w.nodes = {{{0, 0}, {}, 1.0}, {{2, 0}, {}, 1.0}};
    CHECK(center_of_mass(w) == Vec2{1, 0});
    w.nodes = {{{0, 0}, {}, 1.0}, {{4, 0}, {}, 3.0}};
    CHECK(center_of_mass(w) == Vec2{3, 0});
  }

  TEST_CASE("stepping is deterministic") {
    std::mt19937_64 r1(9), r2(9);
    World a = oracle::random_network(r1, 7, 14, false);
    World b = oracle::random_network(r2, 7, 14, false);
    const std::array<double, kMuscleGroups> sig{};
    for (int i = 0; i < 500; ++i) {
      step(a, SimConfig{}, sig, 0.25);
      step(b, SimConfig{}, sig, 0.25);
    }
    CHECK(a == b);
  }

  TEST_CASE("divergence is reported, not propagated") {
    World w = two_nodes({0, 0}, {1, 0}, 1e300, 0.5);
    Simulator kernel(w);
    CHECK_THROWS_AS(
        [&] {
          for (int i = 0; i < 100; ++i) kernel.step(0.002);
        }(),
        SimulationDiverged);
  }

  TEST_CASE("substeps keep the stability index in bounds") {
    const StarfishSpec spec;
    const auto adult = build_starfish(spec, MorphologyScales::adult());
    SimConfig cfg;
    CHECK(stable_substeps(adult.world, cfg) == 1);
    const auto light = build_starfish(spec, {0.5, 1.0, 1.0});
    const int n = stable_substeps(light.world, cfg);
    CHECK(stability_index(light.world, cfg.dt / n) <= cfg.max_stability_index);
  }

  TEST_CASE("sim config validation") {
    SimConfig cfg;
    cfg.duration = 1.0005;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.duration = 10.0;
    CHECK(cfg.steps() == 5000);
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }

  TEST_CASE("validate_world rejects bad bookkeeping") {
    World w = two_nodes({0, 0}, {1, 0}, 1.0, 1.0);
    CHECK_NOTHROW(validate_world(w));
    w.springs[0].node_b = 0;
    CHECK_THROWS_AS(validate_world(w), ConfigError);
    w.springs[0].node_b = 5;
    CHECK_THROWS_AS(validate_world(w), ConfigError);
    w.springs[0].node_b = 1;
    w.springs[0].muscle_group = 3;
    CHECK_THROWS_AS(validate_world(w), ConfigError);
  }
}

TEST_SUITE("trial") {
  TEST_CASE("zero amplitudes do not locomote") {
    const StarfishSpec spec;
    const auto robot = build_starfish(spec, MorphologyScales::adult());
    SimConfig sim;
    sim.duration = 10.0;
    const auto t = simulate_behavior(robot.world, Genome{}, sim, MotorConfig{});
    CHECK_FALSE(t.diverged);
    CHECK(trial_fitness(t, adult_body_length(spec)) < 0.05);
  }

  TEST_CASE("trial is deterministic and fitness follows from the trajectory") {
    const StarfishSpec spec;
    const auto robot = build_starfish(spec, MorphologyScales::adult());
    SimConfig sim;
    sim.duration = 4.0;
    std::mt19937_64 rng(4);
    const Genome g = random_genome(rng);
    const auto a = simulate_behavior(robot.world, g, sim, MotorConfig{});
    const auto b = simulate_behavior(robot.world, g, sim, MotorConfig{});
    CHECK(a.end_com == b.end_com);
    REQUIRE(a.trajectory.size() == b.trajectory.size());
    for (std::size_t i = 0; i < a.trajectory.size(); ++i)
      CHECK(a.trajectory[i].com == b.trajectory[i].com);
    REQUIRE(a.trajectory.size() == 41);
    CHECK(a.trajectory.front().t == 0.0);
    CHECK(a.trajectory.back().t == doctest::Approx(4.0));
    const double L = adult_body_length(spec);
    const double recomputed =
        std::abs(a.trajectory.back().com.x - a.trajectory.front().com.x) / L;
    CHECK(std::abs(recomputed - trial_fitness(a, L)) < 1e-9);
    CHECK(trial_fitness(a, L) > 0.0);
  }

  TEST_CASE("trajectory csv") {
    oracle::TempDir dir("traj");
    TrialSummary t;
    t.trajectory = {{0.0, {1.0, 2.0}}, {0.1, {1.5, 2.25}}};
    write_trajectory_csv(t, (dir.path() / "t.csv").string());
    CHECK(oracle::read_file(dir.path() / "t.csv") == "t,x_com,y_com\n0,1,2\n0.1,1.5,2.25\n");
  }
}
