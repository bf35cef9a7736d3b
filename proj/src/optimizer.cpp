#include "tokensched/optimizer.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "tokensched/csv.hpp"
#include "tokensched/error.hpp"

namespace tokensched::optimizer {
namespace {

void check_pair(const SystemProfile& small, const SystemProfile& large) {
  if (small.system_id() == large.system_id()) fail_input("small and large systems must differ");
}

std::map<std::string, std::optional<Estimate>> baselines_for(const WorkloadDistribution& dist, Axis axis,
                                                             const SystemProfile& small, const SystemProfile& large) {
  return {{small.system_id(), single_system_totals(dist, axis, small)},
          {large.system_id(), single_system_totals(dist, axis, large)}};
}

// Cost matrix row per query; +inf marks an infeasible system.
std::vector<std::vector<double>> cost_matrix(std::span<const QueryRecord> queries,
                                             const std::vector<const SystemProfile*>& systems,
                                             const CostWeights& weights, CostMode mode) {
  std::vector<std::vector<double>> matrix(queries.size(), std::vector<double>(systems.size()));
  for (std::size_t q = 0; q < queries.size(); ++q) {
    for (std::size_t s = 0; s < systems.size(); ++s) {
      auto est = cost::estimate_query(*systems[s], queries[q], mode);
      matrix[q][s] = est ? weights.combine(est->energy_j, est->runtime_s) : std::numeric_limits<double>::infinity();
    }
  }
  return matrix;
}

std::vector<const SystemProfile*> ordered(const SystemSet& systems) {
  std::vector<const SystemProfile*> out;
  for (const auto& [id, p] : systems) out.push_back(&p);
  return out;
}

}  // namespace

std::optional<Estimate> single_system_totals(const WorkloadDistribution& dist, Axis axis,
                                             const SystemProfile& profile) {
  Estimate totals;
  for (const auto& [tokens, count] : dist.hist(axis)) {
    if (tokens == 0) continue;
    if (!profile.supports(axis, tokens)) return std::nullopt;
    const double f = static_cast<double>(count);
    totals.energy_j += static_cast<double>(tokens) * f * profile::eval_energy_per_token(profile, axis, tokens);
    totals.runtime_s += f * profile::eval_runtime(profile, axis, tokens);
  }
  return totals;
}

std::vector<std::int64_t> default_threshold_grid(const SystemProfile& small, const SystemProfile& large, Axis axis) {
  std::set<std::int64_t> grid{0};
  for (const auto* p : {&small, &large}) {
    for (const auto& point : p->curve(axis)) grid.insert(point.tokens);
  }
  return {grid.begin(), grid.end()};
}

SweepResult sweep_threshold(const WorkloadDistribution& dist, Axis axis, const SystemProfile& small,
                            const SystemProfile& large, const CostWeights& weights,
                            std::span<const std::int64_t> grid) {
  check_pair(small, large);
  weights.validate();
  if (grid.empty()) fail_input("threshold grid must not be empty");
  std::vector<std::int64_t> sorted(grid.begin(), grid.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.front() < 0) fail_input("thresholds must be >= 0");

  SweepResult result;
  result.curve.swept_variable = "threshold";
  result.curve.baselines = baselines_for(dist, axis, small, large);
  bool found = false;
  for (auto threshold : sorted) {
    if (!small.supports(axis, threshold)) {
      result.warnings.push_back("threshold " + std::to_string(threshold) + " skipped: beyond " + small.system_id() +
                                "'s " + to_string(axis) + " capability");
      continue;
    }
    ThresholdPolicy policy{axis, threshold, small.system_id(), large.system_id()};
    cost::AggregateOutcome outcome;
    try {
      outcome = cost::aggregate_energy(dist, policy, small, large);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Infeasible) throw;
      result.warnings.push_back("threshold " + std::to_string(threshold) + " skipped: " + e.what());
      continue;
    }
    SweepPoint point{static_cast<double>(threshold), threshold, outcome.total_energy_j, outcome.total_runtime_s,
                     outcome.cost(weights)};
    result.curve.points.push_back(point);
    if (!found || point.total_cost < result.best_point.total_cost) {
      result.best_point = point;
      result.best = policy;
      found = true;
    }
  }
  if (!found) fail_infeasible("no feasible threshold in grid");
  return result;
}

SweepCurve pareto_sweep(const WorkloadDistribution& dist, Axis axis, const SystemProfile& small,
                        const SystemProfile& large, std::span<const double> lambda_grid,
                        std::span<const std::int64_t> threshold_grid, const CostWeights& scales) {
  if (lambda_grid.empty()) fail_input("lambda grid must not be empty");
  std::vector<double> lambdas(lambda_grid.begin(), lambda_grid.end());
  for (double l : lambdas) {
    if (!(l >= 0.0 && l <= 1.0)) fail_input("lambda values must lie in [0,1]");
  }
  std::sort(lambdas.begin(), lambdas.end());
  lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());

  SweepCurve curve;
  curve.swept_variable = "lambda";
  for (double l : lambdas) {
    CostWeights weights = scales;
    weights.lambda = l;
    auto sweep = sweep_threshold(dist, axis, small, large, weights, threshold_grid);
    auto point = sweep.best_point;
    point.swept_value = l;
    curve.points.push_back(point);
    if (curve.baselines.empty()) curve.baselines = std::move(sweep.curve.baselines);
  }
  return curve;
}

Assignment optimal_assignment(std::span<const QueryRecord> queries, const SystemSet& systems,
                              const CostWeights& weights, CostMode mode) {
  weights.validate();
  if (systems.empty()) fail_input("system set must not be empty");
  const auto profiles = ordered(systems);
  const auto matrix = cost_matrix(queries, profiles, weights, mode);
  Assignment assignment;
  assignment.system_of.reserve(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    std::size_t best = profiles.size();
    for (std::size_t s = 0; s < profiles.size(); ++s) {
      if (matrix[q][s] == std::numeric_limits<double>::infinity()) continue;
      if (best == profiles.size() || matrix[q][s] < matrix[q][best]) best = s;
    }
    if (best == profiles.size()) {
      fail_infeasible("unservable query " + std::to_string(q) + " (m=" + std::to_string(queries[q].m) +
                      ", n=" + std::to_string(queries[q].n) + ")");
    }
    assignment.system_of.push_back(profiles[best]->system_id());
  }
  return assignment;
}

Assignment brute_force_assignment(std::span<const QueryRecord> queries, const SystemSet& systems,
                                  const CostWeights& weights, CostMode mode) {
  weights.validate();
  if (systems.empty()) fail_input("system set must not be empty");
  if (queries.size() > kOracleMaxQueries || systems.size() > kOracleMaxSystems) {
    fail_input("oracle bound: at most " + std::to_string(kOracleMaxQueries) + " queries and " +
               std::to_string(kOracleMaxSystems) + " systems");
  }
  const auto profiles = ordered(systems);
  const auto matrix = cost_matrix(queries, profiles, weights, mode);
  const std::size_t k = profiles.size();

  // Odometer over choice vectors; every total is summed in query order.
  std::vector<std::size_t> choice(queries.size(), 0);
  std::vector<std::size_t> best_choice;
  double best_cost = std::numeric_limits<double>::infinity();
  while (true) {
    double total = 0.0;
    for (std::size_t q = 0; q < queries.size(); ++q) total += matrix[q][choice[q]];
    if (best_choice.empty() || total < best_cost) {
      best_cost = total;
      best_choice = choice;
    }
    std::size_t pos = 0;
    while (pos < choice.size() && ++choice[pos] == k) choice[pos++] = 0;
    if (pos == choice.size()) break;
  }
  if (best_cost == std::numeric_limits<double>::infinity()) fail_infeasible("unservable query in oracle instance");

  Assignment assignment;
  for (auto s : best_choice) assignment.system_of.push_back(profiles[s]->system_id());
  return assignment;
}

Assignment policy_assignment(std::span<const QueryRecord> queries, const ThresholdPolicy& policy) {
  Assignment assignment;
  assignment.system_of.reserve(queries.size());
  for (const auto& q : queries) {
    assignment.system_of.push_back(q.tokens(policy.axis) <= policy.threshold ? policy.small_system
                                                                             : policy.large_system);
  }
  return assignment;
}

std::string to_csv(const SweepCurve& curve) {
  std::ostringstream os;
  os << "swept_value,total_energy_j,total_runtime_s,total_cost\n";
  for (const auto& p : curve.points) {
    os << csv::format_double(p.swept_value) << ',' << csv::format_double(p.total_energy_j) << ','
       << csv::format_double(p.total_runtime_s) << ',' << csv::format_double(p.total_cost) << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const SweepCurve& curve) {
  nlohmann::json j;
  j["swept_variable"] = curve.swept_variable;
  auto baselines = nlohmann::json::object();
  for (const auto& [id, b] : curve.baselines) {
    baselines[id] = b ? nlohmann::json{{"energy_j", b->energy_j}, {"runtime_s", b->runtime_s}} : nlohmann::json(nullptr);
  }
  j["baselines"] = baselines;
  auto points = nlohmann::json::array();
  for (const auto& p : curve.points) {
    points.push_back({{"swept_value", p.swept_value},
                      {"threshold", p.threshold},
                      {"total_energy_j", p.total_energy_j},
                      {"total_runtime_s", p.total_runtime_s},
                      {"total_cost", p.total_cost}});
  }
  j["points"] = points;
  return j;
}

nlohmann::json to_json(const ThresholdPolicy& policy) {
  return {{"axis", to_string(policy.axis)},
          {"threshold", policy.threshold},
          {"small_system", policy.small_system},
          {"large_system", policy.large_system}};
}

}  // namespace tokensched::optimizer
