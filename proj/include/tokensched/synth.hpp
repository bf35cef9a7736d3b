#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>

#include "tokensched/profile.hpp"

namespace tokensched::synth {

/// Shape of a synthetic efficient/fast system pair. The small system costs
/// `small_low_j_per_tok` at or below the crossover and `small_high_j_per_tok`
/// above it; the large system is flat in between the two.
struct CrossoverSpec {
  std::int64_t crossover_tokens = 32;
  double small_low_j_per_tok = 0.5;
  double small_high_j_per_tok = 2.0;
  double large_flat_j_per_tok = 1.0;
  /// Small-system runtime divided by large-system runtime at every grid point.
  double runtime_ratio = 3.0;
  /// Large-system runtime per token; runtime at grid point t is t times this.
  double large_runtime_per_token_s = 0.01;

  std::string small_id = "small";
  std::string large_id = "large";
  std::string model_id = "synthetic";
};

/// Builds both profiles on `grid` (ascending, non-empty), using the same shape
/// for the input and output curves. Between the last grid point at or below
/// the crossover and the next one, the small system's curve ramps in log2
/// space, so it stays continuous.
std::pair<profile::SystemProfile, profile::SystemProfile> make_crossover_profiles(const CrossoverSpec& spec,
                                                                                   std::span<const std::int64_t> grid);

}  // namespace tokensched::synth
