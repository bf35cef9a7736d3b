#pragma once

// Test-only reference computations and random instance generators. Nothing
// here calls into the code paths it is used to check.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "tokensched/profile.hpp"
#include "tokensched/trace.hpp"
#include "tokensched/workload.hpp"

namespace oracle {

/// Constant power held over one segment of a channel's timeline.
struct Segment {
  double duration_s;
  double power_w;
  double alpha;
};

/// A piecewise-constant trace described by segments, its sample encoding and
/// its exact integral computed from the segment geometry.
struct StepTrace {
  std::vector<tokensched::trace::PowerSample> samples;
  std::map<std::string, double> integral_j;  // per channel
  double total_j = 0.0;
};

/// `weight(channel, power, alpha)` maps segment power to the integrand.
template <typename Weight>
StepTrace make_step_trace(std::mt19937_64& rng, const std::vector<std::string>& channels, Weight weight,
                          double min_power = 0.0) {
  std::uniform_real_distribution<double> dur(0.01, 0.5);
  std::uniform_real_distribution<double> pow(min_power, min_power + 100.0);
  std::uniform_real_distribution<double> alpha(0.0, 1.0);
  std::uniform_int_distribution<int> nseg(1, 40);
  StepTrace out;
  std::vector<std::vector<tokensched::trace::PowerSample>> per_channel;
  for (const auto& ch : channels) {
    std::vector<tokensched::trace::PowerSample> lane;
    double t = std::uniform_real_distribution<double>(0.0, 0.3)(rng);
    // Power of the opening sample is irrelevant to the integral.
    lane.push_back({t, pow(rng), alpha(rng), ch});
    const int n = nseg(rng);
    double area = 0.0;
    for (int k = 0; k < n; ++k) {
      Segment seg{dur(rng), pow(rng), alpha(rng)};
      t += seg.duration_s;
      lane.push_back({t, seg.power_w, seg.alpha, ch});
      area += seg.duration_s * weight(ch, seg.power_w, seg.alpha);
    }
    out.integral_j[ch] = area;
    out.total_j += area;
    per_channel.push_back(std::move(lane));
  }
  // Interleave channels by timestamp, as recorders emit them.
  std::vector<std::size_t> cursor(per_channel.size(), 0);
  while (true) {
    std::size_t pick = per_channel.size();
    for (std::size_t c = 0; c < per_channel.size(); ++c) {
      if (cursor[c] < per_channel[c].size() &&
          (pick == per_channel.size() ||
           per_channel[c][cursor[c]].elapsed_s < per_channel[pick][cursor[pick]].elapsed_s)) {
        pick = c;
      }
    }
    if (pick == per_channel.size()) break;
    out.samples.push_back(per_channel[pick][cursor[pick]++]);
  }
  return out;
}

inline bool rel_close(double a, double b, double rel) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) <= rel * scale;
}

/// Random profile on the power-of-two grid 8..max_tokens.
inline tokensched::profile::SystemProfile random_profile(std::mt19937_64& rng, const std::string& id,
                                                         std::int64_t max_tokens = 512) {
  std::uniform_real_distribution<double> energy(0.05, 3.0);
  std::uniform_real_distribution<double> runtime(0.1, 20.0);
  std::vector<tokensched::profile::ProfilePoint> in, out;
  for (std::int64_t t = 8; t <= max_tokens; t *= 2) {
    in.push_back({t, energy(rng), runtime(rng)});
    out.push_back({t, energy(rng), runtime(rng)});
  }
  return tokensched::profile::SystemProfile(id, "random", in, out);
}

inline std::vector<tokensched::workload::QueryRecord> random_queries(std::mt19937_64& rng, std::size_t count,
                                                                     std::int64_t max_tokens = 600) {
  std::uniform_int_distribution<std::int64_t> tok(1, max_tokens);
  std::vector<tokensched::workload::QueryRecord> qs(count);
  for (auto& q : qs) q = {tok(rng), tok(rng)};
  return qs;
}

}  // namespace oracle
