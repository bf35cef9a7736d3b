#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tokensched/profile.hpp"

namespace tokensched::workload {

/// Token counts of a single query. Either side may be zero, not both.
struct QueryRecord {
  std::int64_t m = 0;  // input tokens
  std::int64_t n = 0;  // output tokens

  std::int64_t tokens(Axis axis) const { return axis == Axis::Input ? m : n; }
  friend bool operator==(const QueryRecord&, const QueryRecord&) = default;
};

using Histogram = std::map<std::int64_t, std::uint64_t>;

struct WorkloadDistribution {
  Histogram input_hist;
  Histogram output_hist;

  const Histogram& hist(Axis axis) const { return axis == Axis::Input ? input_hist : output_hist; }
  std::int64_t max_input() const;
  std::int64_t max_output() const;
  std::uint64_t input_total() const;
  std::uint64_t output_total() const;
};

std::uint64_t total_count(const Histogram& hist);

WorkloadDistribution ingest_counts(std::span<const QueryRecord> rows);

/// Pairs the i-th smallest input count with the i-th smallest output count.
/// Re-ingesting the result reproduces `dist`; requires equal totals.
std::vector<QueryRecord> expand_rows(const WorkloadDistribution& dist);

inline constexpr std::int64_t kMaxSynthTokens = 4096;

/// Independent discretized log-normal draws for m and n, clamped to
/// [1, kMaxSynthTokens]. The stream depends only on (count, parameters, seed).
std::vector<QueryRecord> synth_workload(std::int64_t count, double log_mean, double log_sigma, std::uint64_t seed);

/// CSV `m,n`, one row per query.
std::vector<QueryRecord> read_queries_csv(std::istream& in, const std::string& source);
std::vector<QueryRecord> read_queries_file(const std::string& path);
std::string queries_to_csv(std::span<const QueryRecord> rows);

nlohmann::json to_json(const WorkloadDistribution& dist);
WorkloadDistribution distribution_from_json(const nlohmann::json& j);
WorkloadDistribution read_distribution_file(const std::string& path);

}  // namespace tokensched::workload
