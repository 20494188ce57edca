// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <string>
#include <vector>

#include "ccl/bench.hpp"

using namespace ccl;
using namespace ccl::bench;

namespace {

BenchRecord rec(std::string algo, double mean) {
  return {std::move(algo), "noise", 4096, 4096, 100, mean * 0.9, mean * 1.1, mean};
}

}  // namespace

TEST_CASE("summary statistics") {
  const auto r = summarize("optimized_uf", "noise", 8, 8, {3.0, 1.0, 2.0});
  CHECK(r.min_ms == 1.0);
  CHECK(r.max_ms == 3.0);
  CHECK(r.mean_ms == doctest::Approx(2.0));
  CHECK(r.runs == 3);
  const auto one = summarize("x", "y", 1, 1, {0.1});
  CHECK(one.min_ms == one.max_ms);
  CHECK(one.mean_ms == one.min_ms);
  // Repeated equal samples must not drift outside [min, max].
  const auto same = summarize("x", "y", 1, 1, std::vector<double>(7, 0.1));
  CHECK(same.mean_ms <= same.max_ms);
  CHECK(same.mean_ms >= same.min_ms);
  CHECK_THROWS_AS(summarize("x", "y", 1, 1, {}), Error);
}

TEST_CASE("speedups are ratios of means") {
  const std::vector<BenchRecord> records{rec("label_equivalence", 18.64), rec("conventional_uf", 11.56),
                                         rec("line_uf", 4.21), rec("optimized_uf", 3.36)};
  const auto s = speedups(records);
  REQUIRE(s.size() == 1);
  CHECK(*s[0].vs_le == doctest::Approx(5.55).epsilon(0.001));
  CHECK(*s[0].vs_uf == doctest::Approx(3.44).epsilon(0.001));
  CHECK(*s[0].vs_line == doctest::Approx(1.25).epsilon(0.003));
  const auto table = speedup_table_markdown(records);
  CHECK(table.find("5.55x") != std::string::npos);
  CHECK(table.find("3.44x") != std::string::npos);
  CHECK(table.find("1.25x") != std::string::npos);
}

TEST_CASE("CSV report round-trips exactly") {
  const std::vector<BenchRecord> records{rec("optimized_uf", 1.0 / 3.0), rec("line_uf", 0.1)};
  CHECK(parse_csv(to_csv(records)) == records);
  CHECK_THROWS_AS(parse_csv("nope\n"), Error);
  CHECK_THROWS_AS(parse_csv("algo,image,width,height,runs,min_ms,max_ms,mean_ms\na,b,1\n"), Error);
  BenchRecord bad = rec("x", 1);
  bad.image = "a,b";
  CHECK_THROWS_AS(to_csv({bad}), Error);
}

TEST_CASE("markdown table lists min, max and mean per image") {
  const std::vector<BenchRecord> records{rec("label_equivalence", 2.0), rec("optimized_uf", 1.0)};
  const auto md = report(records, ReportFormat::markdown);
  CHECK(md.find("| noise (4096 x 4096) | min |") != std::string::npos);
  CHECK(md.find("| | mean | 2.000 | 1.000 |") != std::string::npos);
  CHECK(md.find("warm-up") != std::string::npos);
  CHECK(parse_report_format("csv") == ReportFormat::csv);
  CHECK_THROWS_AS(parse_report_format("xml"), Error);
}

TEST_CASE("a small bench run verifies and times every combination") {
  BenchConfig cfg;
  cfg.images = {"noise", "spiral", "cameraman"};
  cfg.sizes = {64, 33};
  cfg.runs = 2;
  const auto result = run_bench(cfg);
  CHECK(result.failures.empty());
  REQUIRE(result.records.size() == 3 * 2 * kParallelAlgos.size());
  for (const auto& r : result.records) {
    CHECK(r.runs == 2);
    CHECK(r.min_ms <= r.mean_ms);
    CHECK(r.mean_ms <= r.max_ms);
  }
  CHECK(result.records.front().image == "cameraman");
  CHECK(result.records.front().width == 33);
}

TEST_CASE("bench images") {
  CHECK(bench_image("noise", 16, "") == generate(Pattern::noise, 16, 16, {.density = 0.5}, 1));
  const Image cam = bench_image("cameraman", 512, "");
  CHECK(cam.width() == 512);
  for (const Pixel p : cam.pixels()) REQUIRE((p == 0 || p == 255));
  CHECK_THROWS_AS(bench_image("/no/such.pgm", 8, ""), Error);
}
