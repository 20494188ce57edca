// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccl/algorithms.hpp"
#include "ccl/engine.hpp"
#include "ccl/grid.hpp"

namespace ccl::bench {

/// Wall-clock statistics of one (algorithm, image, size) combination.
struct BenchRecord {
  std::string algo;   // canonical AlgoId name
  std::string image;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t runs = 0;
  double min_ms = 0;
  double max_ms = 0;
  double mean_ms = 0;

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

struct BenchConfig {
  std::vector<AlgoId> algos{kParallelAlgos.begin(), kParallelAlgos.end()};
  std::vector<std::string> images{"noise"};
  std::vector<std::uint32_t> sizes{512};  // square images
  std::uint32_t runs = 100;
  std::optional<engine::BlockConfig> block;  // default: per-algorithm
  engine::ExecOptions exec;
  std::string data_dir;  // empty: default_data_dir()
  bool warmup = true;
};

struct BenchFailure {
  std::string algo;
  std::string image;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::string message;
};

struct BenchResult {
  std::vector<BenchRecord> records;  // sorted by (image, size, algorithm)
  std::vector<BenchFailure> failures;
};

/// $CCL_DATA_DIR if set, otherwise the data/ directory of the source tree.
std::string default_data_dir();

/// Benchmark input of size x size:
///   noise               density 0.5, seed 1
///   spiral, stripes, checkerboard, uniform   synthetic patterns
///   cameraman, astronaut   <data_dir>/<name>.pgm
///   anything else       path to a PGM file
/// Photographs and files are binarized at 128 and resampled (nearest neighbour).
Image bench_image(std::string_view name, std::uint32_t size, const std::string& data_dir);

/// Times every combination. Each combination is first verified against the
/// flood-fill oracle; on mismatch it is reported in `failures` and not timed.
/// Progress lines go to `log` when given.
BenchResult run_bench(const BenchConfig& cfg, std::ostream* log = nullptr);

/// min/max/mean over the given per-run timings.
BenchRecord summarize(std::string algo, std::string image, std::uint32_t width,
                      std::uint32_t height, const std::vector<double>& ms);

enum class ReportFormat { markdown, csv };
ReportFormat parse_report_format(std::string_view name);

/// algo,image,width,height,runs,min_ms,max_ms,mean_ms
std::string to_csv(const std::vector<BenchRecord>& records);
std::vector<BenchRecord> parse_csv(std::string_view text);

/// Grouped per image x size with min/max/mean rows, one column per algorithm.
std::string timing_table_markdown(const std::vector<BenchRecord>& records);

/// mean(baseline) / mean(optimized_uf) for one image and size.
struct Speedup {
  std::string image;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::optional<double> vs_le;
  std::optional<double> vs_uf;
  std::optional<double> vs_line;
};
std::vector<Speedup> speedups(const std::vector<BenchRecord>& records);
std::string speedup_table_markdown(const std::vector<BenchRecord>& records);

/// Full report: a header describing what was timed, the timing table and the
/// speedup table (markdown), or just the CSV rows.
std::string report(const std::vector<BenchRecord>& records, ReportFormat format);

}  // namespace ccl::bench
