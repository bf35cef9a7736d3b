#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tokensched/cost.hpp"

namespace tokensched::optimizer {

using cost::Assignment;
using cost::CostMode;
using cost::CostWeights;
using cost::Estimate;
using cost::ThresholdPolicy;
using profile::SystemProfile;
using profile::SystemSet;
using workload::QueryRecord;
using workload::WorkloadDistribution;

struct SweepPoint {
  double swept_value = 0.0;     // threshold, or lambda for a Pareto sweep
  std::int64_t threshold = 0;   // threshold that produced the totals
  double total_energy_j = 0.0;
  double total_runtime_s = 0.0;
  double total_cost = 0.0;
};

struct SweepCurve {
  std::string swept_variable;  // "threshold" or "lambda"
  std::vector<SweepPoint> points;
  /// Totals with every query on one system; nullopt when that system cannot
  /// serve the whole workload.
  std::map<std::string, std::optional<Estimate>> baselines;
};

struct SweepResult {
  SweepCurve curve;
  ThresholdPolicy best;
  SweepPoint best_point;
  std::vector<std::string> warnings;
};

/// Totals with the whole histogram on `profile`, or nullopt if some key is
/// beyond its capability.
std::optional<Estimate> single_system_totals(const WorkloadDistribution& dist, Axis axis,
                                             const SystemProfile& profile);

/// {0} plus every token count measured by either profile on `axis`.
std::vector<std::int64_t> default_threshold_grid(const SystemProfile& small, const SystemProfile& large, Axis axis);

/// Evaluates every grid threshold (sorted, deduplicated) and returns the
/// minimum-cost one, ties going to the smaller threshold. Thresholds beyond
/// the small system's capability are skipped and reported in `warnings`.
SweepResult sweep_threshold(const WorkloadDistribution& dist, Axis axis, const SystemProfile& small,
                            const SystemProfile& large, const CostWeights& weights,
                            std::span<const std::int64_t> grid);

/// One sweep_threshold per lambda (sorted ascending); `scales` supplies the
/// normalization, its lambda is ignored. Each point records the selected
/// threshold's totals.
SweepCurve pareto_sweep(const WorkloadDistribution& dist, Axis axis, const SystemProfile& small,
                        const SystemProfile& large, std::span<const double> lambda_grid,
                        std::span<const std::int64_t> threshold_grid, const CostWeights& scales);

/// Per-query argmin over systems, ties to the lexicographically smallest id.
///
/// The objective is a sum of independent per-query terms and the only
/// constraint is that the queries are partitioned, so choosing each query's
/// cheapest system minimizes the total exactly.
Assignment optimal_assignment(std::span<const QueryRecord> queries, const SystemSet& systems,
                              const CostWeights& weights, CostMode mode);

inline constexpr std::size_t kOracleMaxQueries = 12;
inline constexpr std::size_t kOracleMaxSystems = 3;

/// Exhaustive search over all |S|^|Q| assignments (test oracle).
Assignment brute_force_assignment(std::span<const QueryRecord> queries, const SystemSet& systems,
                                  const CostWeights& weights, CostMode mode);

/// Assignment induced by a threshold policy on a concrete query list.
Assignment policy_assignment(std::span<const QueryRecord> queries, const ThresholdPolicy& policy);

/// CSV `swept_value,total_energy_j,total_runtime_s,total_cost`.
std::string to_csv(const SweepCurve& curve);
nlohmann::json to_json(const SweepCurve& curve);
nlohmann::json to_json(const ThresholdPolicy& policy);

}  // namespace tokensched::optimizer
