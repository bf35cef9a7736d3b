#include "tokensched/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "tokensched/csv.hpp"
#include "tokensched/error.hpp"

namespace tokensched::workload {
namespace {

std::int64_t max_key(const Histogram& hist) { return hist.empty() ? 0 : hist.rbegin()->first; }

std::vector<std::int64_t> expand(const Histogram& hist) {
  std::vector<std::int64_t> out;
  for (const auto& [tokens, count] : hist) out.insert(out.end(), count, tokens);
  return out;
}

// mt19937_64's output sequence is fixed by the standard; the distributions in
// <random> are not, so the normal variate is derived here by Box-Muller.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

  double next() {
    const double u1 = 1.0 - unit();  // (0, 1]
    const double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 engine_;
};

Histogram hist_from_json(const nlohmann::json& j) {
  Histogram hist;
  for (const auto& [key, value] : j.items()) {
    std::int64_t tokens = 0;
    try {
      std::size_t pos = 0;
      tokens = std::stoll(key, &pos);
      if (pos != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      fail_input("histogram key '" + key + "' is not an integer");
    }
    const auto count = value.get<std::int64_t>();
    if (tokens < 0) fail_input("histogram key must be >= 0, got " + key);
    if (count < 1) fail_input("histogram count must be >= 1 at key " + key);
    hist.emplace(tokens, static_cast<std::uint64_t>(count));
  }
  return hist;
}

nlohmann::json hist_to_json(const Histogram& hist) {
  auto j = nlohmann::json::object();
  for (const auto& [tokens, count] : hist) j[std::to_string(tokens)] = count;
  return j;
}

}  // namespace

std::uint64_t total_count(const Histogram& hist) {
  std::uint64_t total = 0;
  for (const auto& [tokens, count] : hist) total += count;
  return total;
}

std::int64_t WorkloadDistribution::max_input() const { return max_key(input_hist); }
std::int64_t WorkloadDistribution::max_output() const { return max_key(output_hist); }
std::uint64_t WorkloadDistribution::input_total() const { return total_count(input_hist); }
std::uint64_t WorkloadDistribution::output_total() const { return total_count(output_hist); }

WorkloadDistribution ingest_counts(std::span<const QueryRecord> rows) {
  if (rows.empty()) fail_input("empty workload");
  WorkloadDistribution dist;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& q = rows[i];
    if (q.m < 0 || q.n < 0) fail_input("query " + std::to_string(i) + ": negative token count");
    if (q.m == 0 && q.n == 0) fail_input("query " + std::to_string(i) + ": empty query (m = n = 0)");
    ++dist.input_hist[q.m];
    ++dist.output_hist[q.n];
  }
  return dist;
}

std::vector<QueryRecord> expand_rows(const WorkloadDistribution& dist) {
  const auto ms = expand(dist.input_hist);
  const auto ns = expand(dist.output_hist);
  if (ms.size() != ns.size()) fail_input("input and output histograms have different totals");
  std::vector<QueryRecord> rows(ms.size());
  for (std::size_t i = 0; i < ms.size(); ++i) rows[i] = QueryRecord{ms[i], ns[i]};
  return rows;
}

std::vector<QueryRecord> synth_workload(std::int64_t count, double log_mean, double log_sigma, std::uint64_t seed) {
  if (count < 1) fail_input("synth_workload: count must be >= 1");
  if (!(log_sigma > 0.0) || !std::isfinite(log_sigma)) fail_input("synth_workload: log_sigma must be > 0");
  if (!std::isfinite(log_mean)) fail_input("synth_workload: log_mean must be finite");

  NormalSource normal(seed);
  auto draw = [&] {
    const double value = std::round(std::exp(log_mean + log_sigma * normal.next()));
    return static_cast<std::int64_t>(std::clamp(value, 1.0, static_cast<double>(kMaxSynthTokens)));
  };
  std::vector<QueryRecord> rows(static_cast<std::size_t>(count));
  for (auto& q : rows) {
    q.m = draw();
    q.n = draw();
  }
  return rows;
}

std::vector<QueryRecord> read_queries_csv(std::istream& in, const std::string& source) {
  const auto table = csv::read(in, source);
  const auto c_m = table.column("m");
  const auto c_n = table.column("n");
  std::vector<QueryRecord> rows;
  rows.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    QueryRecord q{csv::parse_int(row.fields[c_m], source, row.line), csv::parse_int(row.fields[c_n], source, row.line)};
    if (q.m < 0 || q.n < 0 || (q.m == 0 && q.n == 0)) {
      fail_input(source + ":" + std::to_string(row.line) + ": invalid query token counts");
    }
    rows.push_back(q);
  }
  return rows;
}

std::vector<QueryRecord> read_queries_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_input("cannot open '" + path + "'");
  return read_queries_csv(in, path);
}

std::string queries_to_csv(std::span<const QueryRecord> rows) {
  std::ostringstream os;
  os << "m,n\n";
  for (const auto& q : rows) os << q.m << ',' << q.n << '\n';
  return os.str();
}

nlohmann::json to_json(const WorkloadDistribution& dist) {
  return {{"input_hist", hist_to_json(dist.input_hist)}, {"output_hist", hist_to_json(dist.output_hist)}};
}

WorkloadDistribution distribution_from_json(const nlohmann::json& j) {
  try {
    WorkloadDistribution dist;
    dist.input_hist = hist_from_json(j.at("input_hist"));
    dist.output_hist = hist_from_json(j.at("output_hist"));
    if (dist.input_hist.empty() && dist.output_hist.empty()) fail_input("empty workload");
    return dist;
  } catch (const nlohmann::json::exception& e) {
    fail_input(std::string("histogram: ") + e.what());
  }
}

WorkloadDistribution read_distribution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_input("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    fail_input(path + ": " + e.what());
  }
  return distribution_from_json(j);
}

}  // namespace tokensched::workload
