#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace tokensched {

enum class Axis { Input, Output };

std::string to_string(Axis axis);
Axis axis_from_string(const std::string& name);

namespace profile {

struct ProfilePoint {
  std::int64_t tokens = 0;
  double energy_per_token_j = 0.0;
  double runtime_s = 0.0;
};

/// Measured energy-per-token and runtime of one system on one model.
///
/// The input curve varies prompt length at a fixed output length, the output
/// curve varies generation length at a fixed prompt length. Curves are
/// evaluated by piecewise-linear interpolation in log2(tokens) and clamped to
/// their end values outside the measured range.
class SystemProfile {
 public:
  SystemProfile() = default;
  /// Validates point invariants and ordering; throws an input error otherwise.
  SystemProfile(std::string system_id, std::string model_id, std::vector<ProfilePoint> input_curve,
                std::vector<ProfilePoint> output_curve,
                std::optional<std::int64_t> max_output_tokens = std::nullopt);

  const std::string& system_id() const { return system_id_; }
  const std::string& model_id() const { return model_id_; }
  const std::vector<ProfilePoint>& curve(Axis axis) const;
  const std::vector<ProfilePoint>& input_curve() const { return input_curve_; }
  const std::vector<ProfilePoint>& output_curve() const { return output_curve_; }
  std::optional<std::int64_t> max_output_tokens() const { return max_output_tokens_; }

  /// False when `tokens` exceeds the system's capability on `axis`.
  bool supports(Axis axis, std::int64_t tokens) const;

  /// Returns a copy with every energy value multiplied by `energy_factor`
  /// and every runtime by `runtime_factor`.
  SystemProfile scaled(double energy_factor, double runtime_factor) const;

 private:
  std::string system_id_;
  std::string model_id_;
  std::vector<ProfilePoint> input_curve_;
  std::vector<ProfilePoint> output_curve_;
  std::optional<std::int64_t> max_output_tokens_;
};

using SystemSet = std::map<std::string, SystemProfile>;

/// Builds a SystemSet keyed by system id; duplicate ids or an empty list are input errors.
SystemSet make_system_set(std::vector<SystemProfile> profiles);

double eval_energy_per_token(const SystemProfile& profile, Axis axis, std::int64_t tokens);
double eval_runtime(const SystemProfile& profile, Axis axis, std::int64_t tokens);

/// One row of a benchmark record file: a single trial at one grid cell.
struct BenchmarkRecord {
  std::string system_id;
  std::string model_id;
  Axis axis = Axis::Input;
  std::int64_t tokens = 0;
  double total_energy_j = 0.0;
  double runtime_s = 0.0;
  std::int64_t trial = 0;
};

/// Averages trials per (axis, tokens) cell. Energy per token is the mean
/// total energy divided by the cell's token count.
SystemProfile build_profile(std::span<const BenchmarkRecord> records,
                            std::optional<std::int64_t> max_output_tokens = std::nullopt);

/// CSV `system_id,model_id,axis,tokens,total_energy_j,runtime_s,trial`.
std::vector<BenchmarkRecord> read_records_csv(std::istream& in, const std::string& source);
std::vector<BenchmarkRecord> read_records_file(const std::string& path);

nlohmann::json to_json(const SystemProfile& profile);
SystemProfile profile_from_json(const nlohmann::json& j);
SystemProfile read_profile_file(const std::string& path);

}  // namespace profile
}  // namespace tokensched
