#include "tokensched/cost.hpp"

#include <cmath>

#include "tokensched/error.hpp"

namespace tokensched::cost {
namespace {

std::optional<Estimate> slice_estimate(const SystemProfile& profile, Axis axis, std::int64_t tokens) {
  if (tokens == 0) return Estimate{};
  if (!profile.supports(axis, tokens)) return std::nullopt;
  return Estimate{static_cast<double>(tokens) * profile::eval_energy_per_token(profile, axis, tokens),
                  profile::eval_runtime(profile, axis, tokens)};
}

std::string capability_message(const SystemProfile& profile, std::int64_t tokens) {
  return "capability exceeded: " + profile.system_id() + " cannot process " + std::to_string(tokens) + " tokens";
}

}  // namespace

void CostWeights::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) fail_input("lambda must lie in [0,1]");
  if (!(energy_scale_j > 0.0) || !std::isfinite(energy_scale_j)) fail_input("energy_scale_j must be positive");
  if (!(runtime_scale_s > 0.0) || !std::isfinite(runtime_scale_s)) fail_input("runtime_scale_s must be positive");
}

double CostWeights::combine(double energy_j, double runtime_s) const {
  return lambda * (energy_j / energy_scale_j) + (1.0 - lambda) * (runtime_s / runtime_scale_s);
}

std::string to_string(CostMode mode) {
  switch (mode) {
    case CostMode::InputSlice: return "input-slice";
    case CostMode::OutputSlice: return "output-slice";
    case CostMode::Separable: return "separable";
  }
  fail_internal("unknown cost mode");
}

CostMode cost_mode_from_string(const std::string& name) {
  if (name == "input-slice") return CostMode::InputSlice;
  if (name == "output-slice") return CostMode::OutputSlice;
  if (name == "separable") return CostMode::Separable;
  fail_input("unknown mode '" + name + "' (expected input-slice|output-slice|separable)");
}

bool is_extension(CostMode mode) { return mode == CostMode::Separable; }

double query_cost(const SystemProfile& profile, Axis axis, std::int64_t tokens, const CostWeights& weights) {
  weights.validate();
  if (tokens < 1) fail_input("token count must be >= 1");
  const double energy = static_cast<double>(tokens) * profile::eval_energy_per_token(profile, axis, tokens);
  const double runtime = profile::eval_runtime(profile, axis, tokens);
  return weights.combine(energy, runtime);
}

std::optional<Estimate> estimate_query(const SystemProfile& profile, const QueryRecord& query, CostMode mode) {
  switch (mode) {
    case CostMode::InputSlice: return slice_estimate(profile, Axis::Input, query.m);
    case CostMode::OutputSlice: return slice_estimate(profile, Axis::Output, query.n);
    case CostMode::Separable: {
      auto in = slice_estimate(profile, Axis::Input, query.m);
      auto out = slice_estimate(profile, Axis::Output, query.n);
      if (!in || !out) return std::nullopt;
      return Estimate{in->energy_j + out->energy_j, in->runtime_s + out->runtime_s};
    }
  }
  fail_internal("unknown cost mode");
}

double query_cost(const SystemProfile& profile, const QueryRecord& query, CostMode mode, const CostWeights& weights) {
  auto est = estimate_query(profile, query, mode);
  if (!est) {
    fail_infeasible(capability_message(profile, mode == CostMode::InputSlice ? query.m : query.n));
  }
  return weights.combine(est->energy_j, est->runtime_s);
}

AggregateOutcome aggregate_energy(const WorkloadDistribution& dist, const ThresholdPolicy& policy,
                                  const SystemProfile& small, const SystemProfile& large) {
  if (policy.threshold < 0) fail_input("threshold must be >= 0");
  if (policy.small_system != small.system_id() || policy.large_system != large.system_id()) {
    fail_input("policy systems do not match the supplied profiles");
  }
  if (small.system_id() == large.system_id()) fail_input("small and large systems must differ");
  if (!small.supports(policy.axis, policy.threshold)) {
    fail_infeasible("capability exceeded: threshold " + std::to_string(policy.threshold) + " is beyond " +
                    small.system_id() + "'s limit");
  }

  AggregateOutcome outcome;
  auto& small_totals = outcome.per_system[small.system_id()];
  auto& large_totals = outcome.per_system[large.system_id()];
  for (const auto& [tokens, count] : dist.hist(policy.axis)) {
    if (tokens == 0) continue;
    const bool on_small = tokens <= policy.threshold;
    const auto& profile = on_small ? small : large;
    auto& totals = on_small ? small_totals : large_totals;
    if (!profile.supports(policy.axis, tokens)) fail_infeasible(capability_message(profile, tokens));
    const double f = static_cast<double>(count);
    totals.energy_j += static_cast<double>(tokens) * f * profile::eval_energy_per_token(profile, policy.axis, tokens);
    totals.runtime_s += f * profile::eval_runtime(profile, policy.axis, tokens);
    totals.query_count += count;
  }
  for (const auto& [id, totals] : outcome.per_system) {
    outcome.total_energy_j += totals.energy_j;
    outcome.total_runtime_s += totals.runtime_s;
  }
  return outcome;
}

CostWeights default_weights(double lambda, const WorkloadDistribution& dist, Axis axis,
                            const SystemProfile& reference) {
  double energy = 0.0;
  double runtime = 0.0;
  for (const auto& [tokens, count] : dist.hist(axis)) {
    if (tokens == 0 || !reference.supports(axis, tokens)) continue;
    const double f = static_cast<double>(count);
    energy += static_cast<double>(tokens) * f * profile::eval_energy_per_token(reference, axis, tokens);
    runtime += f * profile::eval_runtime(reference, axis, tokens);
  }
  CostWeights weights{lambda, energy > 0.0 ? energy : 1.0, runtime > 0.0 ? runtime : 1.0};
  weights.validate();
  return weights;
}

Partition to_partition(const Assignment& assignment) {
  Partition partition;
  for (std::size_t i = 0; i < assignment.system_of.size(); ++i) {
    partition[assignment.system_of[i]].push_back(i);
  }
  return partition;
}

double assignment_cost(const Partition& partition, std::span<const QueryRecord> queries, const SystemSet& systems,
                       const CostWeights& weights, CostMode mode) {
  weights.validate();
  std::vector<const SystemProfile*> owner(queries.size(), nullptr);
  for (const auto& [system_id, indices] : partition) {
    auto it = systems.find(system_id);
    if (it == systems.end()) fail_input("partition violation: unknown system '" + system_id + "'");
    for (auto idx : indices) {
      if (idx >= queries.size()) fail_input("partition violation: query index " + std::to_string(idx) + " out of range");
      if (owner[idx] != nullptr) {
        fail_input("partition violation: query " + std::to_string(idx) + " assigned more than once");
      }
      owner[idx] = &it->second;
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (owner[i] == nullptr) fail_input("partition violation: query " + std::to_string(i) + " is unassigned");
    total += query_cost(*owner[i], queries[i], mode, weights);
  }
  return total;
}

double assignment_cost(const Assignment& assignment, std::span<const QueryRecord> queries, const SystemSet& systems,
                       const CostWeights& weights, CostMode mode) {
  if (assignment.system_of.size() != queries.size()) {
    fail_input("partition violation: assignment covers " + std::to_string(assignment.system_of.size()) + " of " +
               std::to_string(queries.size()) + " queries");
  }
  return assignment_cost(to_partition(assignment), queries, systems, weights, mode);
}

nlohmann::json to_json(const CostWeights& weights) {
  return {{"lambda", weights.lambda},
          {"energy_scale_j", weights.energy_scale_j},
          {"runtime_scale_s", weights.runtime_scale_s}};
}

nlohmann::json to_json(const AggregateOutcome& outcome, CostMode mode, const CostWeights& weights) {
  nlohmann::json j;
  j["mode"] = to_string(mode);
  j["extension"] = is_extension(mode);
  j["weights"] = to_json(weights);
  j["total_energy_j"] = outcome.total_energy_j;
  j["total_runtime_s"] = outcome.total_runtime_s;
  j["total_cost"] = outcome.cost(weights);
  auto per = nlohmann::json::object();
  for (const auto& [id, t] : outcome.per_system) {
    per[id] = {{"energy_j", t.energy_j}, {"runtime_s", t.runtime_s}, {"query_count", t.query_count}};
  }
  j["per_system"] = per;
  return j;
}

}  // namespace tokensched::cost
