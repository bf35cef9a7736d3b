#pragma once

// Reduction of recorded power traces to energy totals.
//
// Integration rule: each sample's power is applied to the interval that ends
// at that sample, i.e. E = sum_i P_i * (t_i - t_{i-1}). The first sample of
// every channel therefore contributes nothing. Intervals come from the
// recorded timestamps, never from the nominal sampling period.

#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace tokensched::trace {

struct PowerSample {
  double elapsed_s = 0.0;
  double power_w = 0.0;
  std::optional<double> impact_factor;
  std::string channel;
};

enum class PlatformKind {
  GpuSum,        // plain sum of P * dt over all channels
  WeightedCpu,   // alpha-weighted sum (energy impact factor)
  RaplPackages,  // idle-subtracted package sum
  PerCore,       // sum over active cores only
};

std::string to_string(PlatformKind kind);
PlatformKind platform_kind_from_string(const std::string& name);

struct TraceMeta {
  PlatformKind platform_kind = PlatformKind::GpuSum;
  std::map<std::string, double> idle_power_w;
  double sample_interval_s = 0.0;  // informational only
  /// Channels to integrate for PerCore traces; empty means every channel.
  std::set<std::string> active_cores;
};

struct EnergyResult {
  double total_j = 0.0;
  std::map<std::string, double> per_channel_j;
  double duration_s = 0.0;
  /// Idle-subtracted intervals whose net contribution was below zero.
  std::size_t negative_intervals = 0;
};

EnergyResult integrate_gpu_sum(std::span<const PowerSample> samples);
EnergyResult integrate_weighted_cpu(std::span<const PowerSample> samples);
EnergyResult integrate_rapl(std::span<const PowerSample> samples, const TraceMeta& meta);
EnergyResult integrate_per_core(std::span<const PowerSample> samples,
                                const std::set<std::string>& active_cores);

/// Dispatches on meta.platform_kind.
EnergyResult reduce(std::span<const PowerSample> samples, const TraceMeta& meta);

/// CSV with header `elapsed_s,channel,power_w[,impact_factor]`.
std::vector<PowerSample> read_trace_csv(std::istream& in, const std::string& source);
std::vector<PowerSample> read_trace_file(const std::string& path);

TraceMeta meta_from_json(const nlohmann::json& j);
TraceMeta read_meta_file(const std::string& path);

nlohmann::json to_json(const EnergyResult& result);

}  // namespace tokensched::trace
