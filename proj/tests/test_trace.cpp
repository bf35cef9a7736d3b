#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "tokensched/error.hpp"
#include "tokensched/trace.hpp"

using namespace tokensched;
using namespace tokensched::trace;

namespace {

std::vector<PowerSample> constant(double watts, int samples, double dt, const std::string& channel) {
  std::vector<PowerSample> out;
  for (int i = 0; i < samples; ++i) out.push_back({i * dt, watts, std::nullopt, channel});
  return out;
}

std::vector<PowerSample> ramp() {
  std::vector<PowerSample> out;
  for (int i = 0; i <= 10; ++i) out.push_back({0.1 * i, 5.0 * i, std::nullopt, "gpu"});
  return out;
}

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("integrate_gpu_sum") {
  SUBCASE("constant power") {
    std::vector<PowerSample> s;
    for (int i = 0; i <= 10; ++i) s.push_back({0.2 * i, 10.0, std::nullopt, "gpu"});
    CHECK(integrate_gpu_sum(s).total_j == doctest::Approx(20.0).epsilon(1e-12));
  }
  SUBCASE("single sample has no interval") {
    CHECK(integrate_gpu_sum(constant(10.0, 1, 0.1, "gpu")).total_j == 0.0);
  }
  SUBCASE("ramp") {
    // sum_{i=1..10} 5i * 0.1 = 27.5
    CHECK(integrate_gpu_sum(ramp()).total_j == doctest::Approx(27.5).epsilon(1e-12));
  }
  SUBCASE("channels are summed") {
    auto s = constant(10.0, 3, 0.1, "gpu0");
    auto t = constant(20.0, 3, 0.1, "gpu1");
    s.insert(s.end(), t.begin(), t.end());
    auto r = integrate_gpu_sum(s);
    CHECK(r.per_channel_j.at("gpu0") == doctest::Approx(2.0));
    CHECK(r.per_channel_j.at("gpu1") == doctest::Approx(4.0));
    CHECK(r.total_j == doctest::Approx(6.0));
    CHECK(r.duration_s == doctest::Approx(0.2));
  }
  SUBCASE("errors") {
    CHECK(error_of([] { integrate_gpu_sum({}); }).find("empty trace") != std::string::npos);
    std::vector<PowerSample> s{{0.0, 1.0, {}, "gpu"}, {0.2, 1.0, {}, "gpu"}, {0.1, 1.0, {}, "gpu"}};
    CHECK(error_of([&] { integrate_gpu_sum(s); }).find("timestamp order") != std::string::npos);
    std::vector<PowerSample> dup{{0.1, 1.0, {}, "gpu"}, {0.1, 1.0, {}, "gpu"}};
    CHECK(error_of([&] { integrate_gpu_sum(dup); }).find("timestamp order") != std::string::npos);
    std::vector<PowerSample> neg{{0.0, -1.0, {}, "gpu"}};
    CHECK_THROWS_AS(integrate_gpu_sum(neg), Error);
  }
}

TEST_CASE("integrate_weighted_cpu") {
  SUBCASE("alpha applies to the interval-ending sample") {
    std::vector<PowerSample> s{{0.0, 10.0, 0.3, "cpu"}, {0.2, 10.0, 0.5, "cpu"}, {0.4, 10.0, 1.0, "cpu"}};
    CHECK(integrate_weighted_cpu(s).total_j == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("zero weight") {
    auto s = ramp();
    for (auto& x : s) x.impact_factor = 0.0;
    CHECK(integrate_weighted_cpu(s).total_j == 0.0);
  }
  SUBCASE("unit weight equals the plain sum") {
    auto s = ramp();
    for (auto& x : s) x.impact_factor = 1.0;
    CHECK(integrate_weighted_cpu(s).total_j == integrate_gpu_sum(s).total_j);
  }
  SUBCASE("missing factor") {
    std::vector<PowerSample> s{{0.0, 10.0, 0.3, "cpu"}, {0.2, 10.0, std::nullopt, "cpu"}};
    CHECK(error_of([&] { integrate_weighted_cpu(s); }).find("missing impact factor") != std::string::npos);
  }
  SUBCASE("factor out of range") {
    std::vector<PowerSample> s{{0.0, 10.0, 1.5, "cpu"}};
    CHECK_THROWS_AS(integrate_weighted_cpu(s), Error);
  }
}

TEST_CASE("integrate_rapl") {
  TraceMeta meta;
  meta.platform_kind = PlatformKind::RaplPackages;
  meta.idle_power_w = {{"package-0", 20.0}, {"package-1", 15.0}};

  SUBCASE("constant subtraction") {
    auto s = constant(50.0, 3, 0.1, "package-0");
    auto t = constant(40.0, 3, 0.1, "package-1");
    s.insert(s.end(), t.begin(), t.end());
    auto r = integrate_rapl(s, meta);
    CHECK(r.total_j == doctest::Approx(11.0).epsilon(1e-12));
    CHECK(r.negative_intervals == 0);
  }
  SUBCASE("idle everywhere cancels exactly") {
    auto s = constant(20.0, 5, 0.1, "package-0");
    auto t = constant(15.0, 5, 0.1, "package-1");
    s.insert(s.end(), t.begin(), t.end());
    CHECK(integrate_rapl(s, meta).total_j == 0.0);
  }
  SUBCASE("below idle is reported signed") {
    auto r = integrate_rapl(constant(10.0, 2, 0.1, "package-0"), meta);
    CHECK(r.total_j == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r.negative_intervals == 1);
  }
  SUBCASE("missing baseline") {
    CHECK(error_of([&] { integrate_rapl(constant(10.0, 2, 0.1, "package-2"), meta); })
              .find("missing idle baseline") != std::string::npos);
  }
  SUBCASE("wrong platform kind") {
    TraceMeta other = meta;
    other.platform_kind = PlatformKind::GpuSum;
    CHECK_THROWS_AS(integrate_rapl(constant(10.0, 2, 0.1, "package-0"), other), Error);
  }
}

TEST_CASE("integrate_per_core") {
  std::vector<PowerSample> s;
  for (const char* core : {"core-0", "core-1"}) {
    auto c = constant(5.0, 4, 0.1, core);
    s.insert(s.end(), c.begin(), c.end());
  }
  auto busy = constant(50.0, 4, 0.1, "core-2");
  s.insert(s.end(), busy.begin(), busy.end());

  CHECK(integrate_per_core(s, {"core-0", "core-1"}).total_j == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(integrate_per_core(s, {"core-0", "core-1", "core-2"}).total_j == integrate_gpu_sum(s).total_j);
  CHECK(integrate_per_core(ramp(), {"gpu"}).total_j == doctest::Approx(27.5).epsilon(1e-12));
  CHECK(error_of([&] { integrate_per_core(s, {"core-9"}); }).find("unknown core") != std::string::npos);
  CHECK_THROWS_AS(integrate_per_core(s, {}), Error);
}

TEST_CASE("trace properties") {
  std::mt19937_64 rng(2024);
  const std::vector<std::string> channels{"a", "b", "c"};
  auto plain = [](const std::string&, double p, double) { return p; };

  SUBCASE("matches the closed-form step integral") {
    for (int i = 0; i < 50; ++i) {
      auto trace = oracle::make_step_trace(rng, channels, plain);
      auto r = integrate_gpu_sum(trace.samples);
      CHECK(oracle::rel_close(r.total_j, trace.total_j, 1e-9));
      for (const auto& [ch, e] : trace.integral_j) CHECK(oracle::rel_close(r.per_channel_j.at(ch), e, 1e-9));
    }
  }
  SUBCASE("linearity") {
    auto trace = oracle::make_step_trace(rng, channels, plain);
    auto scaled = trace.samples;
    for (auto& s : scaled) s.power_w *= 3.5;
    CHECK(oracle::rel_close(integrate_gpu_sum(scaled).total_j, 3.5 * integrate_gpu_sum(trace.samples).total_j, 1e-12));
  }
  SUBCASE("additivity under time-shifted concatenation") {
    auto first = oracle::make_step_trace(rng, {"a"}, plain);
    auto second = oracle::make_step_trace(rng, {"a"}, plain);
    auto joined = first.samples;
    const double offset = joined.back().elapsed_s;
    // Zero-power bridge sample: the gap between the traces carries no energy.
    joined.push_back({offset + 1.0, 0.0, std::nullopt, "a"});
    auto shifted = second.samples;
    shifted.front().power_w = 0.0;
    for (auto& s : shifted) s.elapsed_s += offset + 2.0;
    joined.insert(joined.end(), shifted.begin(), shifted.end());
    CHECK(oracle::rel_close(integrate_gpu_sum(joined).total_j,
                            integrate_gpu_sum(first.samples).total_j + integrate_gpu_sum(second.samples).total_j,
                            1e-9));
  }
  SUBCASE("total is the sum of channels") {
    auto trace = oracle::make_step_trace(rng, channels, plain);
    auto r = integrate_gpu_sum(trace.samples);
    double sum = 0.0;
    for (const auto& [ch, e] : r.per_channel_j) sum += e;
    CHECK(oracle::rel_close(r.total_j, sum, 1e-9));
  }
}

TEST_CASE("trace file formats") {
  std::istringstream csv_in(
      "elapsed_s,channel,power_w,impact_factor\n"
      "0.0,cpu,10,0.5\n"
      "# comment\n"
      "0.2,cpu,10,0.5\n"
      "0.4,cpu,10,1.0\n");
  auto samples = read_trace_csv(csv_in, "inline.csv");
  REQUIRE(samples.size() == 3);
  CHECK(samples[2].impact_factor.value() == 1.0);
  CHECK(integrate_weighted_cpu(samples).total_j == doctest::Approx(3.0));

  std::istringstream bad("elapsed_s,channel,power_w\n0.0,gpu,abc\n");
  CHECK(error_of([&] { read_trace_csv(bad, "bad.csv"); }).find("bad.csv:2") != std::string::npos);

  std::istringstream short_row("elapsed_s,channel,power_w\n0.0,gpu\n");
  CHECK_THROWS_AS(read_trace_csv(short_row, "short.csv"), Error);

  auto meta = meta_from_json(nlohmann::json::parse(
      R"({"platform_kind":"rapl-packages","idle_power_w":{"package-0":20.5},"sample_interval_s":0.1})"));
  CHECK(meta.platform_kind == PlatformKind::RaplPackages);
  CHECK(meta.idle_power_w.at("package-0") == 20.5);
  CHECK_THROWS_AS(meta_from_json(nlohmann::json::parse(R"({"platform_kind":"bogus"})")), Error);
  CHECK_THROWS_AS(meta_from_json(nlohmann::json::parse(R"({"platform_kind":"rapl-packages","idle_power_w":{"p":-1}})")),
                  Error);
}
