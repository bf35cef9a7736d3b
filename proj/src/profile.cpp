#include "tokensched/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "tokensched/csv.hpp"
#include "tokensched/error.hpp"

namespace tokensched {

std::string to_string(Axis axis) { return axis == Axis::Input ? "input" : "output"; }

Axis axis_from_string(const std::string& name) {
  if (name == "input") return Axis::Input;
  if (name == "output") return Axis::Output;
  fail_input("unknown axis '" + name + "' (expected input|output)");
}

namespace profile {
namespace {

void validate_curve(const std::vector<ProfilePoint>& curve, const std::string& id, Axis axis) {
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto& p = curve[i];
    const std::string where = id + " " + to_string(axis) + " curve at tokens=" + std::to_string(p.tokens);
    if (p.tokens < 1) fail_input(where + ": tokens must be >= 1");
    if (!(p.energy_per_token_j > 0.0) || !std::isfinite(p.energy_per_token_j)) {
      fail_input(where + ": energy_per_token_j must be positive");
    }
    if (!(p.runtime_s > 0.0) || !std::isfinite(p.runtime_s)) fail_input(where + ": runtime_s must be positive");
    if (i > 0 && !(p.tokens > curve[i - 1].tokens)) fail_input(where + ": tokens must strictly increase");
  }
}

// Piecewise linear in log2(tokens), clamped at both ends.
template <typename Field>
double interpolate(const SystemProfile& profile, Axis axis, std::int64_t tokens, Field field) {
  if (tokens < 1) fail_input("token count must be >= 1, got " + std::to_string(tokens));
  if (!profile.supports(axis, tokens)) {
    fail_infeasible("capability exceeded: " + profile.system_id() + " cannot process " + std::to_string(tokens) +
                    " " + to_string(axis) + " tokens");
  }
  const auto& curve = profile.curve(axis);
  if (curve.empty()) fail_input("no profile data for " + profile.system_id() + " " + to_string(axis) + " axis");
  if (tokens <= curve.front().tokens) return field(curve.front());
  if (tokens >= curve.back().tokens) return field(curve.back());
  auto hi = std::lower_bound(curve.begin(), curve.end(), tokens,
                             [](const ProfilePoint& p, std::int64_t t) { return p.tokens < t; });
  if (hi->tokens == tokens) return field(*hi);
  auto lo = std::prev(hi);
  const double x0 = std::log2(static_cast<double>(lo->tokens));
  const double x1 = std::log2(static_cast<double>(hi->tokens));
  const double x = std::log2(static_cast<double>(tokens));
  const double y0 = field(*lo);
  const double y1 = field(*hi);
  return y0 + (x - x0) / (x1 - x0) * (y1 - y0);
}

std::vector<ProfilePoint> curve_from_json(const nlohmann::json& j) {
  std::vector<ProfilePoint> curve;
  for (const auto& p : j) {
    curve.push_back(ProfilePoint{p.at("tokens").get<std::int64_t>(), p.at("energy_per_token_j").get<double>(),
                                 p.at("runtime_s").get<double>()});
  }
  return curve;
}

nlohmann::json curve_to_json(const std::vector<ProfilePoint>& curve) {
  auto arr = nlohmann::json::array();
  for (const auto& p : curve) {
    arr.push_back({{"tokens", p.tokens}, {"energy_per_token_j", p.energy_per_token_j}, {"runtime_s", p.runtime_s}});
  }
  return arr;
}

}  // namespace

SystemProfile::SystemProfile(std::string system_id, std::string model_id, std::vector<ProfilePoint> input_curve,
                             std::vector<ProfilePoint> output_curve, std::optional<std::int64_t> max_output_tokens)
    : system_id_(std::move(system_id)),
      model_id_(std::move(model_id)),
      input_curve_(std::move(input_curve)),
      output_curve_(std::move(output_curve)),
      max_output_tokens_(max_output_tokens) {
  if (system_id_.empty()) fail_input("profile system_id must not be empty");
  if (input_curve_.empty() && output_curve_.empty()) fail_input("no profile data for " + system_id_);
  validate_curve(input_curve_, system_id_, Axis::Input);
  validate_curve(output_curve_, system_id_, Axis::Output);
  if (max_output_tokens_ && *max_output_tokens_ < 1) fail_input(system_id_ + ": max_output_tokens must be >= 1");
}

const std::vector<ProfilePoint>& SystemProfile::curve(Axis axis) const {
  return axis == Axis::Input ? input_curve_ : output_curve_;
}

bool SystemProfile::supports(Axis axis, std::int64_t tokens) const {
  return axis == Axis::Input || !max_output_tokens_ || tokens <= *max_output_tokens_;
}

SystemProfile SystemProfile::scaled(double energy_factor, double runtime_factor) const {
  auto scale = [&](std::vector<ProfilePoint> curve) {
    for (auto& p : curve) {
      p.energy_per_token_j *= energy_factor;
      p.runtime_s *= runtime_factor;
    }
    return curve;
  };
  return SystemProfile(system_id_, model_id_, scale(input_curve_), scale(output_curve_), max_output_tokens_);
}

SystemSet make_system_set(std::vector<SystemProfile> profiles) {
  if (profiles.empty()) fail_input("system set must not be empty");
  SystemSet set;
  for (auto& p : profiles) {
    auto id = p.system_id();
    if (!set.emplace(id, std::move(p)).second) fail_input("duplicate system id '" + id + "'");
  }
  return set;
}

double eval_energy_per_token(const SystemProfile& profile, Axis axis, std::int64_t tokens) {
  return interpolate(profile, axis, tokens, [](const ProfilePoint& p) { return p.energy_per_token_j; });
}

double eval_runtime(const SystemProfile& profile, Axis axis, std::int64_t tokens) {
  return interpolate(profile, axis, tokens, [](const ProfilePoint& p) { return p.runtime_s; });
}

SystemProfile build_profile(std::span<const BenchmarkRecord> records, std::optional<std::int64_t> max_output_tokens) {
  if (records.empty()) fail_input("invalid record: no benchmark records");
  const auto& system_id = records.front().system_id;
  const auto& model_id = records.front().model_id;

  struct Cell {
    double energy_sum = 0.0;
    double runtime_sum = 0.0;
    std::size_t trials = 0;
  };
  std::map<std::int64_t, Cell> cells[2];
  for (const auto& r : records) {
    if (r.system_id != system_id) fail_input("mixed systems: '" + system_id + "' and '" + r.system_id + "'");
    if (r.model_id != model_id) fail_input("invalid record: mixed models '" + model_id + "' and '" + r.model_id + "'");
    if (r.tokens < 1) fail_input("invalid record: tokens must be >= 1");
    if (!(r.total_energy_j > 0.0) || !(r.runtime_s > 0.0)) {
      fail_input("invalid record: energy and runtime must be positive at tokens=" + std::to_string(r.tokens));
    }
    auto& cell = cells[r.axis == Axis::Input ? 0 : 1][r.tokens];
    cell.energy_sum += r.total_energy_j;
    cell.runtime_sum += r.runtime_s;
    ++cell.trials;
  }

  auto to_curve = [](const std::map<std::int64_t, Cell>& by_tokens) {
    std::vector<ProfilePoint> curve;
    for (const auto& [tokens, cell] : by_tokens) {
      const double n = static_cast<double>(cell.trials);
      curve.push_back(ProfilePoint{tokens, cell.energy_sum / n / static_cast<double>(tokens), cell.runtime_sum / n});
    }
    return curve;
  };
  return SystemProfile(system_id, model_id, to_curve(cells[0]), to_curve(cells[1]), max_output_tokens);
}

std::vector<BenchmarkRecord> read_records_csv(std::istream& in, const std::string& source) {
  const auto table = csv::read(in, source);
  const auto c_sys = table.column("system_id");
  const auto c_model = table.column("model_id");
  const auto c_axis = table.column("axis");
  const auto c_tokens = table.column("tokens");
  const auto c_energy = table.column("total_energy_j");
  const auto c_runtime = table.column("runtime_s");
  const auto c_trial = table.column("trial");

  std::vector<BenchmarkRecord> records;
  for (const auto& row : table.rows) {
    const auto& f = row.fields;
    BenchmarkRecord r;
    r.system_id = f[c_sys];
    r.model_id = f[c_model];
    try {
      r.axis = axis_from_string(f[c_axis]);
    } catch (const Error& e) {
      fail_input(source + ":" + std::to_string(row.line) + ": " + e.what());
    }
    r.tokens = csv::parse_int(f[c_tokens], source, row.line);
    r.total_energy_j = csv::parse_double(f[c_energy], source, row.line);
    r.runtime_s = csv::parse_double(f[c_runtime], source, row.line);
    r.trial = csv::parse_int(f[c_trial], source, row.line);
    if (r.system_id.empty()) fail_input(source + ":" + std::to_string(row.line) + ": empty system_id");
    if (r.tokens < 1) fail_input(source + ":" + std::to_string(row.line) + ": invalid record: tokens must be >= 1");
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<BenchmarkRecord> read_records_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_input("cannot open '" + path + "'");
  return read_records_csv(in, path);
}

nlohmann::json to_json(const SystemProfile& profile) {
  nlohmann::json j;
  j["system_id"] = profile.system_id();
  j["model_id"] = profile.model_id();
  j["max_output_tokens"] = profile.max_output_tokens() ? nlohmann::json(*profile.max_output_tokens()) : nullptr;
  j["input_curve"] = curve_to_json(profile.input_curve());
  j["output_curve"] = curve_to_json(profile.output_curve());
  return j;
}

SystemProfile profile_from_json(const nlohmann::json& j) {
  try {
    std::optional<std::int64_t> cap;
    if (j.contains("max_output_tokens") && !j.at("max_output_tokens").is_null()) {
      cap = j.at("max_output_tokens").get<std::int64_t>();
    }
    auto input = j.contains("input_curve") ? curve_from_json(j.at("input_curve")) : std::vector<ProfilePoint>{};
    auto output = j.contains("output_curve") ? curve_from_json(j.at("output_curve")) : std::vector<ProfilePoint>{};
    return SystemProfile(j.at("system_id").get<std::string>(), j.value("model_id", std::string{}), std::move(input),
                         std::move(output), cap);
  } catch (const nlohmann::json::exception& e) {
    fail_input(std::string("profile: ") + e.what());
  }
}

SystemProfile read_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_input("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    fail_input(path + ": " + e.what());
  }
  return profile_from_json(j);
}

}  // namespace profile
}  // namespace tokensched
