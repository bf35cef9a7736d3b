#include "tokensched/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "tokensched/csv.hpp"
#include "tokensched/error.hpp"

namespace tokensched::trace {
namespace {

void validate(std::span<const PowerSample> samples) {
  if (samples.empty()) fail_input("empty trace");
  std::map<std::string, double> last;
  for (const auto& s : samples) {
    if (!std::isfinite(s.power_w) || s.power_w < 0.0) {
      fail_input("negative power on channel '" + s.channel + "'");
    }
    if (!std::isfinite(s.elapsed_s) || s.elapsed_s < 0.0) {
      fail_input("timestamp order: negative elapsed time on channel '" + s.channel + "'");
    }
    if (s.impact_factor && !(*s.impact_factor >= 0.0 && *s.impact_factor <= 1.0)) {
      fail_input("impact factor outside [0,1] on channel '" + s.channel + "'");
    }
    auto it = last.find(s.channel);
    if (it != last.end()) {
      if (!(s.elapsed_s > it->second)) {
        fail_input("timestamp order: channel '" + s.channel + "' not strictly increasing at t=" +
                   csv::format_double(s.elapsed_s));
      }
      it->second = s.elapsed_s;
    } else {
      last.emplace(s.channel, s.elapsed_s);
    }
  }
}

double trace_duration(std::span<const PowerSample> samples) {
  auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(),
                                      [](const auto& a, const auto& b) { return a.elapsed_s < b.elapsed_s; });
  return hi->elapsed_s - lo->elapsed_s;
}

// Walks every channel interval and accumulates `weight(sample) * dt` into the
// channel's bucket. `include` filters channels.
template <typename Weight, typename Include>
EnergyResult accumulate(std::span<const PowerSample> samples, Weight weight, Include include) {
  EnergyResult result;
  std::map<std::string, double> previous_t;
  for (const auto& s : samples) {
    if (!include(s.channel)) continue;
    auto [it, inserted] = previous_t.try_emplace(s.channel, s.elapsed_s);
    auto& bucket = result.per_channel_j[s.channel];
    if (inserted) continue;
    const double dt = s.elapsed_s - it->second;
    it->second = s.elapsed_s;
    const double contribution = weight(s) * dt;
    if (contribution < 0.0) ++result.negative_intervals;
    bucket += contribution;
  }
  for (const auto& [channel, joules] : result.per_channel_j) result.total_j += joules;
  result.duration_s = trace_duration(samples);
  return result;
}

constexpr auto kAll = [](const std::string&) { return true; };

}  // namespace

std::string to_string(PlatformKind kind) {
  switch (kind) {
    case PlatformKind::GpuSum: return "gpu-sum";
    case PlatformKind::WeightedCpu: return "weighted-cpu";
    case PlatformKind::RaplPackages: return "rapl-packages";
    case PlatformKind::PerCore: return "per-core";
  }
  fail_internal("unknown platform kind");
}

PlatformKind platform_kind_from_string(const std::string& name) {
  if (name == "gpu-sum") return PlatformKind::GpuSum;
  if (name == "weighted-cpu") return PlatformKind::WeightedCpu;
  if (name == "rapl-packages") return PlatformKind::RaplPackages;
  if (name == "per-core") return PlatformKind::PerCore;
  fail_input("unknown platform_kind '" + name + "'");
}

EnergyResult integrate_gpu_sum(std::span<const PowerSample> samples) {
  validate(samples);
  return accumulate(samples, [](const PowerSample& s) { return s.power_w; }, kAll);
}

EnergyResult integrate_weighted_cpu(std::span<const PowerSample> samples) {
  validate(samples);
  for (const auto& s : samples) {
    if (!s.impact_factor) {
      fail_input("missing impact factor on channel '" + s.channel + "' at t=" + csv::format_double(s.elapsed_s));
    }
  }
  return accumulate(samples, [](const PowerSample& s) { return *s.impact_factor * s.power_w; }, kAll);
}

EnergyResult integrate_rapl(std::span<const PowerSample> samples, const TraceMeta& meta) {
  validate(samples);
  if (meta.platform_kind != PlatformKind::RaplPackages) {
    fail_input("integrate_rapl requires platform_kind rapl-packages");
  }
  for (const auto& [channel, watts] : meta.idle_power_w) {
    if (!(watts >= 0.0)) fail_input("negative idle power for '" + channel + "'");
  }
  for (const auto& s : samples) {
    if (!meta.idle_power_w.contains(s.channel)) {
      fail_input("missing idle baseline for channel '" + s.channel + "'");
    }
  }
  return accumulate(
      samples, [&](const PowerSample& s) { return s.power_w - meta.idle_power_w.at(s.channel); }, kAll);
}

EnergyResult integrate_per_core(std::span<const PowerSample> samples,
                                const std::set<std::string>& active_cores) {
  validate(samples);
  if (active_cores.empty()) fail_input("unknown core: active core set is empty");
  std::set<std::string> present;
  for (const auto& s : samples) present.insert(s.channel);
  for (const auto& core : active_cores) {
    if (!present.contains(core)) fail_input("unknown core '" + core + "'");
  }
  return accumulate(
      samples, [](const PowerSample& s) { return s.power_w; },
      [&](const std::string& channel) { return active_cores.contains(channel); });
}

EnergyResult reduce(std::span<const PowerSample> samples, const TraceMeta& meta) {
  switch (meta.platform_kind) {
    case PlatformKind::GpuSum: return integrate_gpu_sum(samples);
    case PlatformKind::WeightedCpu: return integrate_weighted_cpu(samples);
    case PlatformKind::RaplPackages: return integrate_rapl(samples, meta);
    case PlatformKind::PerCore: {
      if (!meta.active_cores.empty()) return integrate_per_core(samples, meta.active_cores);
      std::set<std::string> all;
      for (const auto& s : samples) all.insert(s.channel);
      return integrate_per_core(samples, all);
    }
  }
  fail_internal("unknown platform kind");
}

std::vector<PowerSample> read_trace_csv(std::istream& in, const std::string& source) {
  const auto table = csv::read(in, source);
  const auto t_col = table.column("elapsed_s");
  const auto c_col = table.column("channel");
  const auto p_col = table.column("power_w");
  const bool has_alpha = table.has_column("impact_factor");
  const auto a_col = has_alpha ? table.column("impact_factor") : 0;

  std::vector<PowerSample> samples;
  samples.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    PowerSample s;
    s.elapsed_s = csv::parse_double(row.fields[t_col], source, row.line);
    s.channel = row.fields[c_col];
    s.power_w = csv::parse_double(row.fields[p_col], source, row.line);
    if (s.channel.empty()) fail_input(source + ":" + std::to_string(row.line) + ": empty channel");
    if (has_alpha && !row.fields[a_col].empty()) {
      s.impact_factor = csv::parse_double(row.fields[a_col], source, row.line);
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<PowerSample> read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_input("cannot open '" + path + "'");
  return read_trace_csv(in, path);
}

TraceMeta meta_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail_input("trace meta must be a JSON object");
  TraceMeta meta;
  try {
    meta.platform_kind = platform_kind_from_string(j.at("platform_kind").get<std::string>());
    if (j.contains("idle_power_w")) {
      for (const auto& [channel, watts] : j.at("idle_power_w").items()) {
        const double w = watts.get<double>();
        if (!(w >= 0.0)) fail_input("negative idle power for '" + channel + "'");
        meta.idle_power_w.emplace(channel, w);
      }
    }
    if (j.contains("sample_interval_s") && !j.at("sample_interval_s").is_null()) {
      meta.sample_interval_s = j.at("sample_interval_s").get<double>();
    }
    if (j.contains("active_cores")) {
      for (const auto& core : j.at("active_cores")) meta.active_cores.insert(core.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    fail_input(std::string("trace meta: ") + e.what());
  }
  return meta;
}

TraceMeta read_meta_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_input("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    fail_input(path + ": " + e.what());
  }
  return meta_from_json(j);
}

nlohmann::json to_json(const EnergyResult& result) {
  nlohmann::json j;
  j["total_j"] = result.total_j;
  j["per_channel_j"] = result.per_channel_j;
  j["duration_s"] = result.duration_s;
  j["negative_intervals"] = result.negative_intervals;
  return j;
}

}  // namespace tokensched::trace
