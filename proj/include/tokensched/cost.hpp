#pragma once

// Per-query scalarized cost and distribution-level aggregates.
//
//   U(q, s) = lambda * E(q, s) / energy_scale_j + (1 - lambda) * R(q, s) / runtime_scale_s
//
// Energy and runtime are in different units, so both terms are divided by an
// explicit scale before mixing. Every exported result carries the scales used.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tokensched/profile.hpp"
#include "tokensched/workload.hpp"

namespace tokensched::cost {

using profile::SystemProfile;
using profile::SystemSet;
using workload::QueryRecord;
using workload::WorkloadDistribution;

struct CostWeights {
  double lambda = 1.0;
  double energy_scale_j = 1.0;
  double runtime_scale_s = 1.0;

  /// Throws an input error unless lambda is in [0,1] and both scales are positive.
  void validate() const;
  double combine(double energy_j, double runtime_s) const;
};

/// Which measured slice(s) price a query.
///
/// Separable mode adds the input-slice and output-slice estimates
/// (E = m*E_in(m) + n*E_out(n), R = R_in(m) + R_out(n)). The profiles never
/// measure that joint surface, so separable results are an extrapolation and
/// are tagged as such in exports.
enum class CostMode { InputSlice, OutputSlice, Separable };

std::string to_string(CostMode mode);
CostMode cost_mode_from_string(const std::string& name);
bool is_extension(CostMode mode);

/// Energy and runtime of one query on one system.
struct Estimate {
  double energy_j = 0.0;
  double runtime_s = 0.0;
};

/// U for a single slice evaluation: E = tokens * energy_per_token(tokens).
double query_cost(const SystemProfile& profile, Axis axis, std::int64_t tokens, const CostWeights& weights);

/// Estimate for a whole query under `mode`. A zero token count on a priced
/// axis contributes nothing. Returns nullopt when the system cannot serve it.
std::optional<Estimate> estimate_query(const SystemProfile& profile, const QueryRecord& query, CostMode mode);

/// Like estimate_query but throws "capability exceeded" when infeasible.
double query_cost(const SystemProfile& profile, const QueryRecord& query, CostMode mode, const CostWeights& weights);

/// Route queries with token count <= threshold to `small_system`, the rest to `large_system`.
struct ThresholdPolicy {
  Axis axis = Axis::Input;
  std::int64_t threshold = 0;
  std::string small_system;
  std::string large_system;
};

struct SystemTotals {
  double energy_j = 0.0;
  double runtime_s = 0.0;
  std::uint64_t query_count = 0;
};

struct AggregateOutcome {
  double total_energy_j = 0.0;
  double total_runtime_s = 0.0;
  std::map<std::string, SystemTotals> per_system;

  double cost(const CostWeights& weights) const { return weights.combine(total_energy_j, total_runtime_s); }
};

/// Threshold-split totals over a histogram:
///   E = sum_{t<=T} t f(t) E_small(t) + sum_{t>T} t f(t) E_large(t)
///   R = sum_{t<=T} f(t) R_small(t)   + sum_{t>T} f(t) R_large(t)
/// Only keys present in the histogram are visited; key 0 carries no work.
AggregateOutcome aggregate_energy(const WorkloadDistribution& dist, const ThresholdPolicy& policy,
                                  const SystemProfile& small, const SystemProfile& large);

/// Scales taken from the all-on-`reference` totals; a zero total falls back to 1.
CostWeights default_weights(double lambda, const WorkloadDistribution& dist, Axis axis,
                            const SystemProfile& reference);

/// Per-query system choice, indexed like the query list.
struct Assignment {
  std::vector<std::string> system_of;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Explicit {Q_s}: system id -> indices of the queries it serves.
using Partition = std::map<std::string, std::vector<std::size_t>>;

Partition to_partition(const Assignment& assignment);

/// Sum of U over all (query, system) pairs. The partition must cover every
/// query exactly once ("partition violation" otherwise). Terms are added in
/// query-index order.
double assignment_cost(const Partition& partition, std::span<const QueryRecord> queries, const SystemSet& systems,
                       const CostWeights& weights, CostMode mode);
double assignment_cost(const Assignment& assignment, std::span<const QueryRecord> queries, const SystemSet& systems,
                       const CostWeights& weights, CostMode mode);

nlohmann::json to_json(const CostWeights& weights);
nlohmann::json to_json(const AggregateOutcome& outcome, CostMode mode, const CostWeights& weights);

}  // namespace tokensched::cost
