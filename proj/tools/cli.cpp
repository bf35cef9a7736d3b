#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "tokensched/cost.hpp"
#include "tokensched/csv.hpp"
#include "tokensched/error.hpp"
#include "tokensched/optimizer.hpp"
#include "tokensched/profile.hpp"
#include "tokensched/synth.hpp"
#include "tokensched/trace.hpp"
#include "tokensched/workload.hpp"

namespace tokensched::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Effective configuration. Defaults, then the --config JSON document, then
// command-line flags, each layer overriding the previous one.
struct RunConfig {
  std::string trace;
  std::string meta;
  std::vector<std::string> active_cores;
  std::string records;
  std::int64_t max_output_tokens = 0;  // 0: no cap
  std::string queries;
  std::string histogram;
  std::string small_profile;
  std::string large_profile;
  std::vector<std::string> profiles;
  double lambda = 1.0;
  double energy_scale_j = 0.0;  // 0: derive from the workload
  double runtime_scale_s = 0.0;
  std::string axis = "input";
  std::string mode;  // empty: slice matching the axis
  std::vector<std::int64_t> thresholds;
  std::vector<double> lambdas;
  std::string out = ".";
  std::uint64_t seed = 42;
  std::int64_t count = 2000;
  double log_mean = std::log(32.0);
  double log_sigma = 1.0;
  bool oracle = false;
};

// `out` is excluded so that identical runs into different directories embed
// the same digest.
json provenance_json(const RunConfig& c, const std::string& command) {
  return {{"command", command},
          {"trace", c.trace},
          {"meta", c.meta},
          {"active_cores", c.active_cores},
          {"records", c.records},
          {"max_output_tokens", c.max_output_tokens},
          {"queries", c.queries},
          {"histogram", c.histogram},
          {"small_profile", c.small_profile},
          {"large_profile", c.large_profile},
          {"profiles", c.profiles},
          {"lambda", c.lambda},
          {"energy_scale_j", c.energy_scale_j},
          {"runtime_scale_s", c.runtime_scale_s},
          {"axis", c.axis},
          {"mode", c.mode},
          {"thresholds", c.thresholds},
          {"lambdas", c.lambdas},
          {"seed", c.seed},
          {"count", c.count},
          {"log_mean", c.log_mean},
          {"log_sigma", c.log_sigma},
          {"oracle", c.oracle}};
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    fail_internal("sha256 failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < length; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

std::string config_digest(const RunConfig& c, const std::string& command) {
  return sha256_hex(provenance_json(c, command).dump());
}

void load_config_file(const std::string& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) fail_input("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail_input(path + ": " + e.what());
  }
  if (!j.is_object()) fail_input(path + ": config must be a JSON object");
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key) && !j.at(key).is_null()) j.at(key).get_to(field);
    };
    get("trace", c.trace);
    get("meta", c.meta);
    get("active_cores", c.active_cores);
    get("records", c.records);
    get("max_output_tokens", c.max_output_tokens);
    get("queries", c.queries);
    get("histogram", c.histogram);
    get("small_profile", c.small_profile);
    get("large_profile", c.large_profile);
    get("profiles", c.profiles);
    get("lambda", c.lambda);
    get("energy_scale_j", c.energy_scale_j);
    get("runtime_scale_s", c.runtime_scale_s);
    get("axis", c.axis);
    get("mode", c.mode);
    get("thresholds", c.thresholds);
    get("lambdas", c.lambdas);
    get("out", c.out);
    get("seed", c.seed);
    get("count", c.count);
    get("log_mean", c.log_mean);
    get("log_sigma", c.log_sigma);
  } catch (const json::exception& e) {
    fail_input(path + ": " + e.what());
  }
}

// Looks for --config before CLI11 runs so flags can override file values.
std::string find_config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

void write_text(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail_input("cannot write '" + path.string() + "'");
  out << content;
  if (!out) fail_input("write failed for '" + path.string() + "'");
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void write_csv(const fs::path& path, const std::string& digest, const std::string& body) {
  write_text(path, "# config_digest=" + digest + "\n" + body);
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) fail_input("--lambda must lie in [0,1]");
}

cost::CostMode resolve_mode(const RunConfig& c) {
  if (!c.mode.empty()) return cost::cost_mode_from_string(c.mode);
  return axis_from_string(c.axis) == Axis::Input ? cost::CostMode::InputSlice : cost::CostMode::OutputSlice;
}

std::optional<std::int64_t> output_cap(const RunConfig& c) {
  if (c.max_output_tokens < 0) fail_input("max_output_tokens must be >= 0");
  return c.max_output_tokens > 0 ? std::optional<std::int64_t>(c.max_output_tokens) : std::nullopt;
}

std::string require(const std::string& value, const char* what) {
  if (value.empty()) fail_input(std::string("missing required input: ") + what);
  return value;
}

workload::WorkloadDistribution load_workload(const RunConfig& c) {
  if (!c.queries.empty()) {
    const auto rows = workload::read_queries_file(c.queries);
    return workload::ingest_counts(rows);
  }
  if (!c.histogram.empty()) return workload::read_distribution_file(c.histogram);
  fail_input("missing required input: --queries or --histogram");
}

cost::CostWeights resolve_weights(const RunConfig& c, const workload::WorkloadDistribution& dist, Axis axis,
                                  const profile::SystemProfile& large) {
  check_lambda(c.lambda);
  auto weights = cost::default_weights(c.lambda, dist, axis, large);
  if (c.energy_scale_j > 0.0) weights.energy_scale_j = c.energy_scale_j;
  if (c.runtime_scale_s > 0.0) weights.runtime_scale_s = c.runtime_scale_s;
  if (c.energy_scale_j < 0.0 || c.runtime_scale_s < 0.0) fail_input("scales must be positive");
  return weights;
}

std::vector<double> lambda_grid(const RunConfig& c) {
  if (!c.lambdas.empty()) return c.lambdas;
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

std::string file_safe(std::string id) {
  for (auto& ch : id) {
    if (ch == '/' || ch == '\\' || ch == ' ') ch = '_';
  }
  return id;
}

// ---- commands -------------------------------------------------------------

int cmd_trace_reduce(const RunConfig& c, const std::string& digest, std::ostream& out) {
  const auto samples = trace::read_trace_file(require(c.trace, "--trace"));
  auto meta = trace::read_meta_file(require(c.meta, "--meta"));
  if (!c.active_cores.empty()) meta.active_cores = {c.active_cores.begin(), c.active_cores.end()};
  const auto result = trace::reduce(samples, meta);
  auto report = trace::to_json(result);
  report["platform_kind"] = trace::to_string(meta.platform_kind);
  report["config_digest"] = digest;
  write_json(fs::path(c.out) / "energy_report.json", report);
  out << "total_j " << csv::format_double(result.total_j) << "\n";
  return kExitOk;
}

int cmd_profile_build(const RunConfig& c, const std::string& digest, std::ostream& out) {
  const auto records = profile::read_records_file(require(c.records, "--records"));
  if (records.empty()) fail_input("invalid record: no benchmark records");
  std::map<std::string, std::vector<profile::BenchmarkRecord>> by_system;
  for (const auto& r : records) by_system[r.system_id].push_back(r);
  for (const auto& [id, group] : by_system) {
    const auto built = profile::build_profile(group, output_cap(c));
    auto j = profile::to_json(built);
    j["config_digest"] = digest;
    const auto path = fs::path(c.out) / ("profile_" + file_safe(id) + ".json");
    write_json(path, j);
    out << "wrote " << path.string() << "\n";
  }
  return kExitOk;
}

int cmd_workload_ingest(const RunConfig& c, const std::string& digest, std::ostream& out) {
  const auto rows = workload::read_queries_file(require(c.queries, "--queries"));
  const auto dist = workload::ingest_counts(rows);
  auto j = workload::to_json(dist);
  j["config_digest"] = digest;
  write_json(fs::path(c.out) / "histogram.json", j);
  out << "queries " << rows.size() << "\n";
  return kExitOk;
}

int cmd_workload_synth(const RunConfig& c, const std::string& digest, std::ostream& out) {
  const auto rows = workload::synth_workload(c.count, c.log_mean, c.log_sigma, c.seed);
  write_csv(fs::path(c.out) / "queries.csv", digest, workload::queries_to_csv(rows));
  out << "queries " << rows.size() << "\n";
  return kExitOk;
}

json sweep_report(const optimizer::SweepCurve& curve, const cost::CostWeights& weights, Axis axis,
                  const std::string& digest) {
  auto j = optimizer::to_json(curve);
  j["config_digest"] = digest;
  j["axis"] = to_string(axis);
  j["weights"] = cost::to_json(weights);
  return j;
}

int cmd_optimize(const RunConfig& c, const std::string& digest, std::ostream& out, std::ostream& err,
                 bool with_pareto) {
  const auto axis = axis_from_string(c.axis);
  const auto small = profile::read_profile_file(require(c.small_profile, "--small"));
  const auto large = profile::read_profile_file(require(c.large_profile, "--large"));
  const auto dist = load_workload(c);
  const auto weights = resolve_weights(c, dist, axis, large);
  const auto grid = c.thresholds.empty() ? optimizer::default_threshold_grid(small, large, axis) : c.thresholds;
  const auto suffix = to_string(axis);
  const fs::path dir(c.out);

  const auto sweep = optimizer::sweep_threshold(dist, axis, small, large, weights, grid);
  for (const auto& w : sweep.warnings) err << "warning: " << w << "\n";
  write_csv(dir / ("sweep_" + suffix + ".csv"), digest, optimizer::to_csv(sweep.curve));
  auto report = sweep_report(sweep.curve, weights, axis, digest);
  report["warnings"] = sweep.warnings;
  write_json(dir / ("sweep_" + suffix + ".json"), report);

  json policy;
  policy["config_digest"] = digest;
  policy["policy"] = optimizer::to_json(sweep.best);
  policy["weights"] = cost::to_json(weights);
  policy["total_energy_j"] = sweep.best_point.total_energy_j;
  policy["total_runtime_s"] = sweep.best_point.total_runtime_s;
  policy["total_cost"] = sweep.best_point.total_cost;
  const auto& large_baseline = sweep.curve.baselines.at(large.system_id());
  policy["energy_reduction_vs_large"] =
      large_baseline && large_baseline->energy_j > 0.0
          ? json(1.0 - sweep.best_point.total_energy_j / large_baseline->energy_j)
          : json(nullptr);
  write_json(dir / ("policy_" + suffix + ".json"), policy);

  out << "axis " << suffix << " best_threshold " << sweep.best.threshold << " energy_j "
      << csv::format_double(sweep.best_point.total_energy_j) << " runtime_s "
      << csv::format_double(sweep.best_point.total_runtime_s) << "\n";

  if (with_pareto) {
    const auto lambdas = lambda_grid(c);
    const auto curve = optimizer::pareto_sweep(dist, axis, small, large, lambdas, grid, weights);
    write_csv(dir / ("pareto_" + suffix + ".csv"), digest, optimizer::to_csv(curve));
    write_json(dir / ("pareto_" + suffix + ".json"), sweep_report(curve, weights, axis, digest));
  }
  return kExitOk;
}

int cmd_pareto(const RunConfig& c, const std::string& digest, std::ostream& out) {
  const auto axis = axis_from_string(c.axis);
  const auto small = profile::read_profile_file(require(c.small_profile, "--small"));
  const auto large = profile::read_profile_file(require(c.large_profile, "--large"));
  const auto dist = load_workload(c);
  const auto scales = resolve_weights(c, dist, axis, large);
  const auto grid = c.thresholds.empty() ? optimizer::default_threshold_grid(small, large, axis) : c.thresholds;
  const auto curve = optimizer::pareto_sweep(dist, axis, small, large, lambda_grid(c), grid, scales);
  const auto suffix = to_string(axis);
  write_csv(fs::path(c.out) / ("pareto_" + suffix + ".csv"), digest, optimizer::to_csv(curve));
  write_json(fs::path(c.out) / ("pareto_" + suffix + ".json"), sweep_report(curve, scales, axis, digest));
  for (const auto& p : curve.points) {
    out << "lambda " << csv::format_double(p.swept_value) << " threshold " << p.threshold << "\n";
  }
  return kExitOk;
}

// Scales for N-system assignment: all-on totals of the fastest system that
// can serve every query.
cost::CostWeights assignment_weights(const RunConfig& c, std::span<const workload::QueryRecord> queries,
                                     const profile::SystemSet& systems, cost::CostMode mode) {
  check_lambda(c.lambda);
  cost::CostWeights weights{c.lambda, 1.0, 1.0};
  std::optional<cost::Estimate> reference;
  for (const auto& [id, p] : systems) {
    cost::Estimate totals;
    bool feasible = true;
    for (const auto& q : queries) {
      auto est = cost::estimate_query(p, q, mode);
      if (!est) {
        feasible = false;
        break;
      }
      totals.energy_j += est->energy_j;
      totals.runtime_s += est->runtime_s;
    }
    if (feasible && (!reference || totals.runtime_s < reference->runtime_s)) reference = totals;
  }
  if (reference && reference->energy_j > 0.0) weights.energy_scale_j = reference->energy_j;
  if (reference && reference->runtime_s > 0.0) weights.runtime_scale_s = reference->runtime_s;
  if (c.energy_scale_j > 0.0) weights.energy_scale_j = c.energy_scale_j;
  if (c.runtime_scale_s > 0.0) weights.runtime_scale_s = c.runtime_scale_s;
  weights.validate();
  return weights;
}

int cmd_assign(const RunConfig& c, const std::string& digest, std::ostream& out) {
  const auto queries = workload::read_queries_file(require(c.queries, "--queries"));
  std::vector<profile::SystemProfile> loaded;
  for (const auto& path : c.profiles) loaded.push_back(profile::read_profile_file(path));
  if (!c.small_profile.empty()) loaded.push_back(profile::read_profile_file(c.small_profile));
  if (!c.large_profile.empty()) loaded.push_back(profile::read_profile_file(c.large_profile));
  const auto systems = profile::make_system_set(std::move(loaded));
  const auto mode = resolve_mode(c);
  const auto weights = assignment_weights(c, queries, systems, mode);

  const auto assignment = optimizer::optimal_assignment(queries, systems, weights, mode);
  std::ostringstream body;
  body << "query_index,m,n,system_id,cost\n";
  std::map<std::string, cost::SystemTotals> per_system;
  for (const auto& [id, p] : systems) per_system[id];
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const auto& id = assignment.system_of[i];
    const auto& profile = systems.at(id);
    const auto est = *cost::estimate_query(profile, queries[i], mode);
    auto& totals = per_system[id];
    totals.energy_j += est.energy_j;
    totals.runtime_s += est.runtime_s;
    ++totals.query_count;
    body << i << ',' << queries[i].m << ',' << queries[i].n << ',' << id << ','
         << csv::format_double(weights.combine(est.energy_j, est.runtime_s)) << '\n';
  }
  write_csv(fs::path(c.out) / "assignment.csv", digest, body.str());

  const double total = cost::assignment_cost(assignment, queries, systems, weights, mode);
  json footer;
  footer["config_digest"] = digest;
  footer["mode"] = cost::to_string(mode);
  footer["extension"] = cost::is_extension(mode);
  footer["weights"] = cost::to_json(weights);
  footer["query_count"] = queries.size();
  footer["total_cost"] = total;
  double energy = 0.0;
  double runtime = 0.0;
  auto per = json::object();
  for (const auto& [id, t] : per_system) {
    energy += t.energy_j;
    runtime += t.runtime_s;
    per[id] = {{"energy_j", t.energy_j}, {"runtime_s", t.runtime_s}, {"query_count", t.query_count}};
  }
  footer["total_energy_j"] = energy;
  footer["total_runtime_s"] = runtime;
  footer["per_system"] = per;
  if (c.oracle) {
    const auto oracle = optimizer::brute_force_assignment(queries, systems, weights, mode);
    const double oracle_total = cost::assignment_cost(oracle, queries, systems, weights, mode);
    footer["oracle_total_cost"] = oracle_total;
    footer["oracle_match"] = oracle_total == total;
    out << "oracle_total_cost " << csv::format_double(oracle_total) << "\n";
  }
  write_json(fs::path(c.out) / "assignment.json", footer);
  out << "total_cost " << csv::format_double(total) << "\n";
  return kExitOk;
}

// Synthetic end-to-end run: crossover profiles, a log-normal workload, both
// axis sweeps, a Pareto sweep and a per-query assignment.
int cmd_demo(const RunConfig& c, const std::string& digest, std::ostream& out, std::ostream& err) {
  const fs::path dir(c.out);
  std::vector<std::int64_t> grid;
  for (std::int64_t t = 8; t <= 4096; t *= 2) grid.push_back(t);
  synth::CrossoverSpec spec;
  const auto [small, large] = synth::make_crossover_profiles(spec, grid);
  auto small_json = profile::to_json(small);
  auto large_json = profile::to_json(large);
  small_json["config_digest"] = digest;
  large_json["config_digest"] = digest;
  write_json(dir / "profile_small.json", small_json);
  write_json(dir / "profile_large.json", large_json);

  const auto rows = workload::synth_workload(c.count, c.log_mean, c.log_sigma, c.seed);
  write_csv(dir / "queries.csv", digest, workload::queries_to_csv(rows));
  auto hist = workload::to_json(workload::ingest_counts(rows));
  hist["config_digest"] = digest;
  write_json(dir / "histogram.json", hist);

  RunConfig step = c;
  step.small_profile = (dir / "profile_small.json").string();
  step.large_profile = (dir / "profile_large.json").string();
  step.queries = (dir / "queries.csv").string();
  step.histogram.clear();
  step.thresholds = {0, 8, 16, 32, 64, 128, 256, 512};

  step.axis = "input";
  cmd_optimize(step, digest, out, err, /*with_pareto=*/true);
  step.axis = "output";
  cmd_optimize(step, digest, out, err, /*with_pareto=*/false);

  step.profiles.clear();
  step.mode = "input-slice";
  return cmd_assign(step, digest, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Energy/runtime-aware placement of LLM queries on heterogeneous systems", "tokensched"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; flags override its fields");
  app.add_option("--out", config.out, "Output directory");
  app.add_option("--seed", config.seed, "Random seed");
  app.add_option("--lambda", config.lambda, "Energy weight in [0,1]");
  app.add_option("--axis", config.axis, "Token axis")->check(CLI::IsMember({"input", "output"}));
  app.add_option("--mode", config.mode, "Pricing mode")
      ->check(CLI::IsMember({"input-slice", "output-slice", "separable"}));
  app.add_option("--energy-scale", config.energy_scale_j, "Energy normalization (J)");
  app.add_option("--runtime-scale", config.runtime_scale_s, "Runtime normalization (s)");

  auto* trace_cmd = app.add_subcommand("trace", "Power trace tools");
  trace_cmd->require_subcommand(1);
  auto* reduce_cmd = trace_cmd->add_subcommand("reduce", "Integrate a power trace to energy");
  reduce_cmd->add_option("--trace", config.trace, "Trace CSV")->required();
  reduce_cmd->add_option("--meta", config.meta, "Trace meta JSON")->required();
  reduce_cmd->add_option("--active-cores", config.active_cores, "Active core channels (per-core traces)")
      ->delimiter(',');

  auto* profile_cmd = app.add_subcommand("profile", "System profile tools");
  profile_cmd->require_subcommand(1);
  auto* build_cmd = profile_cmd->add_subcommand("build", "Build profiles from benchmark records");
  build_cmd->add_option("--records", config.records, "Benchmark record CSV")->required();
  build_cmd->add_option("--max-output-tokens", config.max_output_tokens, "Output-token capability cap");

  auto* workload_cmd = app.add_subcommand("workload", "Workload tools");
  workload_cmd->require_subcommand(1);
  auto* ingest_cmd = workload_cmd->add_subcommand("ingest", "Histogram a query count file");
  ingest_cmd->add_option("--queries", config.queries, "Query CSV (m,n)")->required();
  auto* synth_cmd = workload_cmd->add_subcommand("synth", "Generate a synthetic query count file");
  synth_cmd->add_option("--count", config.count, "Number of queries");
  synth_cmd->add_option("--log-mean", config.log_mean, "Mean of log token count");
  synth_cmd->add_option("--log-sigma", config.log_sigma, "Std-dev of log token count");

  auto add_pair_options = [&](CLI::App* cmd) {
    cmd->add_option("--small", config.small_profile, "Efficient system profile JSON");
    cmd->add_option("--large", config.large_profile, "Fast system profile JSON");
    cmd->add_option("--queries", config.queries, "Query CSV (m,n)");
    cmd->add_option("--histogram", config.histogram, "Histogram JSON");
    cmd->add_option("--thresholds", config.thresholds, "Threshold grid")->delimiter(',');
    cmd->add_option("--lambdas", config.lambdas, "Lambda grid")->delimiter(',');
  };
  auto* optimize_cmd = app.add_subcommand("optimize", "Sweep threshold policies");
  add_pair_options(optimize_cmd);
  auto* pareto_cmd = app.add_subcommand("pareto", "Sweep lambda and record the chosen thresholds");
  add_pair_options(pareto_cmd);

  auto* assign_cmd = app.add_subcommand("assign", "Per-query optimal assignment");
  assign_cmd->add_option("--queries", config.queries, "Query CSV (m,n)");
  assign_cmd->add_option("--profile", config.profiles, "System profile JSON (repeatable)");
  assign_cmd->add_option("--small", config.small_profile, "Additional profile JSON");
  assign_cmd->add_option("--large", config.large_profile, "Additional profile JSON");
  assign_cmd->add_flag("--oracle", config.oracle, "Cross-check against exhaustive search")->group("");

  auto* demo_cmd = app.add_subcommand("demo", "Synthetic end-to-end run");
  demo_cmd->add_option("--count", config.count, "Number of queries");

  try {
    const auto path = find_config_path(args);
    if (!path.empty()) load_config_file(path, config);

    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    try {
      app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitInput;
    }

    auto digest = [&](const std::string& command) { return config_digest(config, command); };
    if (*reduce_cmd) return cmd_trace_reduce(config, digest("trace reduce"), out);
    if (*build_cmd) return cmd_profile_build(config, digest("profile build"), out);
    if (*ingest_cmd) return cmd_workload_ingest(config, digest("workload ingest"), out);
    if (*synth_cmd) return cmd_workload_synth(config, digest("workload synth"), out);
    if (*optimize_cmd) return cmd_optimize(config, digest("optimize"), out, err, !config.lambdas.empty());
    if (*pareto_cmd) return cmd_pareto(config, digest("pareto"), out);
    if (*assign_cmd) return cmd_assign(config, digest("assign"), out);
    if (*demo_cmd) return cmd_demo(config, digest("demo"), out, err);
    fail_internal("no command dispatched");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::Input: return kExitInput;
      case ErrorKind::Infeasible: return kExitInfeasible;
      case ErrorKind::Internal: return kExitInternal;
    }
    return kExitInternal;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace tokensched::cli
