#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tokensched/error.hpp"
#include "tokensched/workload.hpp"

using namespace tokensched;
using namespace tokensched::workload;

TEST_CASE("ingest_counts") {
  SUBCASE("counting") {
    std::vector<QueryRecord> rows{{8, 32}, {8, 64}, {16, 32}};
    auto d = ingest_counts(rows);
    CHECK(d.input_hist == Histogram{{8, 2}, {16, 1}});
    CHECK(d.output_hist == Histogram{{32, 2}, {64, 1}});
    CHECK(d.max_input() == 16);
    CHECK(d.max_output() == 64);
  }
  SUBCASE("singleton") {
    std::vector<QueryRecord> rows{{5, 7}};
    auto d = ingest_counts(rows);
    CHECK(d.input_hist == Histogram{{5, 1}});
    CHECK(d.output_hist == Histogram{{7, 1}});
  }
  SUBCASE("count conservation") {
    auto rows = synth_workload(1000, std::log(64.0), 1.2, 3);
    auto d = ingest_counts(rows);
    CHECK(d.input_total() == 1000);
    CHECK(d.output_total() == 1000);
    for (const auto& [k, c] : d.input_hist) CHECK(c >= 1);
  }
  SUBCASE("errors") {
    try {
      ingest_counts({});
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()) == "empty workload");
    }
    std::vector<QueryRecord> empty_query{{0, 0}};
    CHECK_THROWS_AS(ingest_counts(empty_query), Error);
    std::vector<QueryRecord> negative{{-1, 4}};
    CHECK_THROWS_AS(ingest_counts(negative), Error);
  }
}

TEST_CASE("expanded histograms re-ingest to the same histogram") {
  auto rows = synth_workload(500, std::log(40.0), 0.9, 99);
  auto d = ingest_counts(rows);
  auto again = ingest_counts(expand_rows(d));
  CHECK(again.input_hist == d.input_hist);
  CHECK(again.output_hist == d.output_hist);

  WorkloadDistribution uneven{{{8, 2}}, {{8, 1}}};
  CHECK_THROWS_AS(expand_rows(uneven), Error);
}

TEST_CASE("synth_workload") {
  SUBCASE("deterministic") {
    CHECK(synth_workload(5, 3.0, 1.0, 17) == synth_workload(5, 3.0, 1.0, 17));
    CHECK(synth_workload(50, 3.0, 1.0, 17) != synth_workload(50, 3.0, 1.0, 18));
  }
  SUBCASE("prefix stability") {
    auto a = synth_workload(10, 3.0, 1.0, 5);
    auto b = synth_workload(20, 3.0, 1.0, 5);
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
  SUBCASE("degenerate spread") {
    for (const auto& q : synth_workload(200, std::log(100.0), 1e-9, 1)) {
      CHECK(q.m == 100);
      CHECK(q.n == 100);
    }
  }
  SUBCASE("sample median tracks exp(log_mean)") {
    auto rows = synth_workload(10000, std::log(100.0), 0.8, 12345);
    std::vector<std::int64_t> ms;
    for (const auto& q : rows) ms.push_back(q.m);
    std::nth_element(ms.begin(), ms.begin() + ms.size() / 2, ms.end());
    const double median = static_cast<double>(ms[ms.size() / 2]);
    CHECK(median >= 85.0);
    CHECK(median <= 115.0);
  }
  SUBCASE("clamped range") {
    for (const auto& q : synth_workload(2000, std::log(2000.0), 3.0, 8)) {
      CHECK(q.m >= 1);
      CHECK(q.m <= kMaxSynthTokens);
      CHECK(q.n >= 1);
      CHECK(q.n <= kMaxSynthTokens);
    }
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(synth_workload(0, 1.0, 1.0, 1), Error);
    CHECK_THROWS_AS(synth_workload(5, 1.0, 0.0, 1), Error);
  }
}

TEST_CASE("workload files") {
  std::istringstream in("m,n\n8,32\n16,0\n");
  auto rows = read_queries_csv(in, "q.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1] == QueryRecord{16, 0});
  std::istringstream again(queries_to_csv(rows));
  CHECK(read_queries_csv(again, "again.csv") == rows);

  std::istringstream bad("m,n\n8,32\n0,0\n");
  try {
    read_queries_csv(bad, "q.csv");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("q.csv:3") != std::string::npos);
  }

  auto d = ingest_counts(rows);
  auto j = to_json(d);
  CHECK(j["input_hist"]["8"] == 1);
  auto back = distribution_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.input_hist == d.input_hist);
  CHECK(back.output_hist == d.output_hist);
  CHECK_THROWS_AS(distribution_from_json(nlohmann::json::parse(R"({"input_hist":{"x":1},"output_hist":{}})")), Error);
  CHECK_THROWS_AS(distribution_from_json(nlohmann::json::parse(R"({"input_hist":{"8":0},"output_hist":{}})")), Error);
}
