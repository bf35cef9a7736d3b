#include <doctest.h>

#include <cmath>
#include <limits>

#include "tokensched/error.hpp"
#include "tokensched/optimizer.hpp"
#include "tokensched/synth.hpp"

using namespace tokensched;
using namespace tokensched::synth;

namespace {

std::vector<std::int64_t> grid_8_to(std::int64_t hi) {
  std::vector<std::int64_t> g;
  for (std::int64_t t = 8; t <= hi; t *= 2) g.push_back(t);
  return g;
}

}  // namespace

TEST_CASE("make_crossover_profiles") {
  CrossoverSpec spec;
  spec.crossover_tokens = 32;
  spec.small_low_j_per_tok = 0.5;
  spec.small_high_j_per_tok = 2.0;
  spec.large_flat_j_per_tok = 1.0;
  const auto grid = grid_8_to(256);
  const auto [small, large] = make_crossover_profiles(spec, grid);

  SUBCASE("construction") {
    for (auto axis : {Axis::Input, Axis::Output}) {
      CHECK(profile::eval_energy_per_token(small, axis, 8) == 0.5);
      CHECK(profile::eval_energy_per_token(small, axis, 32) == 0.5);
      CHECK(profile::eval_energy_per_token(small, axis, 256) == 2.0);
      for (std::int64_t t = 1; t <= 300; t += 13) CHECK(profile::eval_energy_per_token(large, axis, t) == 1.0);
    }
    // Continuous ramp across the crossover interval.
    const double mid = profile::eval_energy_per_token(small, Axis::Input, 45);
    CHECK(mid > 0.5);
    CHECK(mid < 2.0);
  }
  SUBCASE("small system is slower by the runtime ratio") {
    for (auto t : grid) {
      CHECK(profile::eval_runtime(small, Axis::Input, t) ==
            doctest::Approx(spec.runtime_ratio * profile::eval_runtime(large, Axis::Input, t)));
    }
  }
  SUBCASE("deterministic") {
    const auto [s2, l2] = make_crossover_profiles(spec, grid);
    CHECK(profile::to_json(s2) == profile::to_json(small));
    CHECK(profile::to_json(l2) == profile::to_json(large));
  }
  SUBCASE("crossover beyond the grid") {
    CrossoverSpec wide = spec;
    wide.crossover_tokens = 10000;
    const auto [s, l] = make_crossover_profiles(wide, grid);
    for (auto t : grid) CHECK(profile::eval_energy_per_token(s, Axis::Input, t) == 0.5);
  }
  SUBCASE("invalid shapes") {
    CrossoverSpec bad = spec;
    bad.small_high_j_per_tok = 0.9;
    try {
      make_crossover_profiles(bad, grid);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("no crossover") != std::string::npos);
    }
    CHECK_THROWS_AS(make_crossover_profiles(spec, std::vector<std::int64_t>{}), Error);
    CHECK_THROWS_AS(make_crossover_profiles(spec, std::vector<std::int64_t>{16, 8}), Error);
  }
}

TEST_CASE("sweep recovers the crossover with a two-sided workload") {
  const auto grid = grid_8_to(4096);
  const auto [small, large] = make_crossover_profiles({}, grid);
  // Equal mass on grid points either side of the crossover.
  workload::WorkloadDistribution dist;
  for (auto t : grid) dist.input_hist[t] = 10;
  const cost::CostWeights w{1.0, 1.0, 1.0};
  const std::vector<std::int64_t> thresholds{0, 8, 16, 32, 64, 128, 256};
  const auto res = optimizer::sweep_threshold(dist, Axis::Input, small, large, w, thresholds);

  // Exhaustive: each grid key's cheapest system, summed.
  double best_energy = 0.0;
  for (auto t : grid) {
    best_energy += 10.0 * static_cast<double>(t) *
                   std::min(profile::eval_energy_per_token(small, Axis::Input, t),
                            profile::eval_energy_per_token(large, Axis::Input, t));
  }
  CHECK(res.best.threshold == 32);
  CHECK(res.best_point.total_energy_j == doctest::Approx(best_energy).epsilon(1e-12));
}
