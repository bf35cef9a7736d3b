#include "tokensched/synth.hpp"

#include <vector>

#include "tokensched/error.hpp"

namespace tokensched::synth {

std::pair<profile::SystemProfile, profile::SystemProfile> make_crossover_profiles(const CrossoverSpec& spec,
                                                                                   std::span<const std::int64_t> grid) {
  if (!(spec.small_low_j_per_tok > 0.0) || !(spec.small_low_j_per_tok < spec.large_flat_j_per_tok) ||
      !(spec.large_flat_j_per_tok < spec.small_high_j_per_tok)) {
    fail_input("no crossover: need 0 < small_low < large_flat < small_high");
  }
  if (spec.crossover_tokens < 1) fail_input("no crossover: crossover_tokens must be >= 1");
  if (!(spec.runtime_ratio > 0.0) || !(spec.large_runtime_per_token_s > 0.0)) {
    fail_input("runtime ratio and runtime per token must be positive");
  }
  if (grid.empty()) fail_input("grid must not be empty");

  std::vector<profile::ProfilePoint> small_curve;
  std::vector<profile::ProfilePoint> large_curve;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto t = grid[i];
    if (t < 1 || (i > 0 && t <= grid[i - 1])) fail_input("grid must be ascending positive token counts");
    const double large_runtime = spec.large_runtime_per_token_s * static_cast<double>(t);
    const double small_energy = t <= spec.crossover_tokens ? spec.small_low_j_per_tok : spec.small_high_j_per_tok;
    small_curve.push_back({t, small_energy, spec.runtime_ratio * large_runtime});
    large_curve.push_back({t, spec.large_flat_j_per_tok, large_runtime});
  }
  return {profile::SystemProfile(spec.small_id, spec.model_id, small_curve, small_curve),
          profile::SystemProfile(spec.large_id, spec.model_id, large_curve, large_curve)};
}

}  // namespace tokensched::synth
