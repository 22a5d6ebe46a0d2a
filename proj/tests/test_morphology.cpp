#include <doctest.h>

#include <map>
#include <set>

#include "wobble/errors.hpp"
#include "wobble/morphology.hpp"

using namespace wobble;

namespace {

double rung_gap(const Starfish& r, std::size_t t, std::size_t s) {
  const auto mid = [&](std::pair<int, int> rung) {
    return (r.world.nodes[static_cast<std::size_t>(rung.first)].position +
            r.world.nodes[static_cast<std::size_t>(rung.second)].position) *
           0.5;
  };
  return norm(mid(r.tentacles[t].rungs[s + 1]) - mid(r.tentacles[t].rungs[s]));
}

}  // namespace

TEST_SUITE("morphology") {
  TEST_CASE("adult build has twelve muscle groups of eight muscles") {
    const auto r = build_starfish(StarfishSpec{}, MorphologyScales::adult());
    CHECK(r.world.nodes.size() == 109);
    CHECK(r.world.springs.size() == 264);
    CHECK(r.tentacles.size() == 6);
    std::map<int, int> per_group;
    std::map<int, int> sign_sum;
    for (const auto& s : r.world.springs) {
      if (!s.is_muscle()) continue;
      ++per_group[s.muscle_group];
      sign_sum[s.muscle_group] += s.muscle_sign;
    }
    CHECK(per_group.size() == 12);
    for (const auto& [g, n] : per_group) {
      CHECK(n == 8);
      CHECK(sign_sum[g] == 0);
    }
  }

  TEST_CASE("each group spans one half tentacle") {
    const auto r = build_starfish(StarfishSpec{}, MorphologyScales::adult());
    std::map<int, std::set<int>> group_nodes;
    for (const auto& s : r.world.springs)
      if (s.is_muscle()) {
        group_nodes[s.muscle_group].insert(s.node_a);
        group_nodes[s.muscle_group].insert(s.node_b);
      }
    for (std::size_t t = 0; t < 6; ++t) {
      const auto& rungs = r.tentacles[t].rungs;
      for (std::size_t k = 0; k < rungs.size(); ++k) {
        const int g = static_cast<int>(2 * t) + (k <= 4 ? 0 : 1);
        CHECK(group_nodes[g].count(rungs[k].first) == 1);
        if (k == 4) CHECK(group_nodes[g + 1].count(rungs[k].first) == 1);
      }
    }
  }

  TEST_CASE("mass scale doubles masses and keeps geometry") {
    const auto a = build_starfish(StarfishSpec{}, {1, 1, 1});
    const auto b = build_starfish(StarfishSpec{}, {2, 1, 1});
    for (std::size_t i = 0; i < a.world.nodes.size(); ++i) {
      CHECK(b.world.nodes[i].mass == 2.0 * a.world.nodes[i].mass);
      CHECK(b.world.nodes[i].position == a.world.nodes[i].position);
    }
  }

  TEST_CASE("stiffness scale only touches muscles") {
    const auto a = build_starfish(StarfishSpec{}, {1, 1, 1});
    const auto b = build_starfish(StarfishSpec{}, {1, 0.5, 1});
    for (std::size_t i = 0; i < a.world.nodes.size(); ++i)
      CHECK(b.world.nodes[i] == a.world.nodes[i]);
    for (std::size_t i = 0; i < a.world.springs.size(); ++i) {
      const auto& sa = a.world.springs[i];
      const auto& sb = b.world.springs[i];
      CHECK(sb.stiffness == (sa.is_muscle() ? 0.5 * sa.stiffness : sa.stiffness));
      CHECK(sb.rest_length == sa.rest_length);
    }
  }

  TEST_CASE("size scale halves section heights and keeps masses") {
    const auto a = build_starfish(StarfishSpec{}, {1, 1, 1});
    const auto b = build_starfish(StarfishSpec{}, {1, 1, 0.5});
    for (std::size_t i = 0; i < a.world.nodes.size(); ++i)
      CHECK(b.world.nodes[i].mass == a.world.nodes[i].mass);
    for (std::size_t t = 0; t < 6; ++t)
      for (std::size_t s = 0; s < 8; ++s)
        CHECK(std::abs(rung_gap(b, t, s) - 0.5 * rung_gap(a, t, s)) < 1e-9);
  }

  TEST_CASE("adult body length") {
    const StarfishSpec spec;
    const double L = adult_body_length(spec);
    CHECK(L > 0.0);
    CHECK(L == adult_body_length(spec));
    CHECK(std::abs(L - 2.0 * (spec.body_radius + 8 * spec.section_height)) < 1e-9);
    StarfishSpec taller = spec;
    taller.section_height *= 2;
    CHECK(adult_body_length(taller) > L);
  }

  TEST_CASE("robot rests on the ground") {
    const auto r = build_starfish(StarfishSpec{}, MorphologyScales::adult());
    double low = 1e9;
    for (const auto& p : r.world.nodes) low = std::min(low, p.position.y);
    CHECK(std::abs(low) < 1e-12);
  }

  TEST_CASE("builds are deterministic") {
    const auto a = build_starfish(StarfishSpec{}, {0.7, 1.3, 0.9});
    const auto b = build_starfish(StarfishSpec{}, {0.7, 1.3, 0.9});
    CHECK(a.world == b.world);
  }

  TEST_CASE("invalid scales and specs are rejected") {
    CHECK_THROWS_AS(build_starfish(StarfishSpec{}, {0, 1, 1}), ConfigError);
    CHECK_THROWS_AS(build_starfish(StarfishSpec{}, {1, -1, 1}), ConfigError);
    StarfishSpec bad;
    bad.node_mass = 0;
    CHECK_THROWS_AS(build_starfish(bad, MorphologyScales::adult()), ConfigError);
  }
}
