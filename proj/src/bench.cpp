// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "ccl/bench.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <tuple>

#include "ccl/baselines.hpp"
#include "ccl/partition.hpp"

#ifndef CCL_DEFAULT_DATA_DIR
#define CCL_DEFAULT_DATA_DIR "data"
#endif

namespace ccl::bench {
namespace {

using Clock = std::chrono::steady_clock;

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string format_exact(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

int algo_rank(const std::string& name) {
  try {
    return static_cast<int>(parse_algo(name));
  } catch (const Error&) {
    return static_cast<int>(kAllAlgos.size());
  }
}

auto sort_key(const BenchRecord& r) {
  return std::make_tuple(r.image, static_cast<std::uint64_t>(r.width) * r.height, r.width,
                         algo_rank(r.algo), r.algo);
}

std::string size_label(std::uint32_t w, std::uint32_t h) {
  return std::to_string(w) + " x " + std::to_string(h);
}

// (image, width, height) groups in record order.
using GroupKey = std::tuple<std::string, std::uint32_t, std::uint32_t>;

std::vector<GroupKey> groups_of(const std::vector<BenchRecord>& records) {
  std::vector<GroupKey> keys;
  for (const auto& r : records) {
    GroupKey k{r.image, r.width, r.height};
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  }
  return keys;
}

const BenchRecord* find_record(const std::vector<BenchRecord>& records, const GroupKey& key,
                               AlgoId algo) {
  for (const auto& r : records) {
    if (GroupKey{r.image, r.width, r.height} == key && algo_rank(r.algo) == static_cast<int>(algo)) {
      return &r;
    }
  }
  return nullptr;
}

}  // namespace

std::string default_data_dir() {
  if (const char* env = std::getenv("CCL_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return CCL_DEFAULT_DATA_DIR;
}

Image bench_image(std::string_view name, std::uint32_t size, const std::string& data_dir) {
  if (name == "noise") return generate(Pattern::noise, size, size, {.density = 0.5}, 1);
  if (name == "spiral" || name == "stripes" || name == "checkerboard" || name == "uniform") {
    return generate(parse_pattern(name), size, size, {.stripe_period = 8});
  }
  std::string path(name);
  if (name == "cameraman" || name == "astronaut") {
    path = (data_dir.empty() ? default_data_dir() : data_dir) + "/" + path + ".pgm";
  }
  const Image base = binarize(load_pgm(path));
  if (base.width() == size && base.height() == size) return base;
  return resize_nearest(base, size, size);
}

BenchRecord summarize(std::string algo, std::string image, std::uint32_t width,
                      std::uint32_t height, const std::vector<double>& ms) {
  if (ms.empty()) throw Error("cannot summarize zero runs");
  BenchRecord r{std::move(algo), std::move(image), width, height,
                static_cast<std::uint32_t>(ms.size()), ms.front(), ms.front(), 0.0};
  double sum = 0;
  for (const double v : ms) {
    r.min_ms = std::min(r.min_ms, v);
    r.max_ms = std::max(r.max_ms, v);
    sum += v;
  }
  // Clamp guards the rounding of sum / n against min/max for equal samples.
  r.mean_ms = std::clamp(sum / static_cast<double>(ms.size()), r.min_ms, r.max_ms);
  return r;
}

BenchResult run_bench(const BenchConfig& cfg, std::ostream* log) {
  if (cfg.runs == 0) throw Error("runs must be >= 1");
  BenchResult result;
  for (const auto& name : cfg.images) {
    for (const std::uint32_t size : cfg.sizes) {
      const Image img = bench_image(name, size, cfg.data_dir);
      const LabelMap truth = baselines::flood_fill_oracle(img);
      for (const AlgoId algo : cfg.algos) {
        const engine::BlockConfig block = cfg.block.value_or(default_block(algo));
        const std::string algo_name(to_string(algo));
        LabelMap labels = run_algorithm(algo, img, block, cfg.exec);
        if (const auto diff = first_difference(labels, truth)) {
          const Coord c = img.coord(*diff);
          BenchFailure f{algo_name, name, img.width(), img.height(),
                         "partition differs from oracle at cell " + std::to_string(*diff) + " (" +
                             std::to_string(c.x) + ", " + std::to_string(c.y) + "): label " +
                             std::to_string(labels[*diff]) + " vs oracle " +
                             std::to_string(truth[*diff])};
          if (log != nullptr) *log << "FAILED " << algo_name << " on " << name << ": " << f.message << "\n";
          result.failures.push_back(std::move(f));
          continue;
        }
        if (cfg.warmup) labels = run_algorithm(algo, img, block, cfg.exec);
        std::vector<double> ms;
        ms.reserve(cfg.runs);
        for (std::uint32_t run = 0; run < cfg.runs; ++run) {
          const auto t0 = Clock::now();
          labels = run_algorithm(algo, img, block, cfg.exec);
          const auto t1 = Clock::now();
          ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        }
        result.records.push_back(summarize(algo_name, name, img.width(), img.height(), ms));
        if (log != nullptr) {
          const auto& r = result.records.back();
          *log << algo_name << " " << name << " " << size_label(r.width, r.height)
               << ": mean " << format_fixed(r.mean_ms, 3) << " ms\n";
        }
      }
    }
  }
  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const BenchRecord& a, const BenchRecord& b) { return sort_key(a) < sort_key(b); });
  return result;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "md" || name == "markdown") return ReportFormat::markdown;
  if (name == "csv") return ReportFormat::csv;
  throw Error("unknown report format '" + std::string(name) + "' (expected md or csv)");
}

std::string to_csv(const std::vector<BenchRecord>& records) {
  std::string out = "algo,image,width,height,runs,min_ms,max_ms,mean_ms\n";
  for (const auto& r : records) {
    if (r.image.find_first_of(",\n") != std::string::npos) {
      throw Error("image name '" + r.image + "' cannot be written to CSV");
    }
    out += r.algo + "," + r.image + "," + std::to_string(r.width) + "," + std::to_string(r.height) +
           "," + std::to_string(r.runs) + "," + format_exact(r.min_ms) + "," +
           format_exact(r.max_ms) + "," + format_exact(r.mean_ms) + "\n";
  }
  return out;
}

std::vector<BenchRecord> parse_csv(std::string_view text) {
  std::vector<BenchRecord> records;
  std::size_t pos = 0;
  bool header = true;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    if (header) {
      if (line != "algo,image,width,height,runs,min_ms,max_ms,mean_ms") {
        throw Error("unexpected bench CSV header");
      }
      header = false;
      continue;
    }
    std::vector<std::string_view> f;
    std::size_t start = 0;
    for (std::size_t comma; (comma = line.find(',', start)) != std::string_view::npos;
         start = comma + 1) {
      f.push_back(line.substr(start, comma - start));
    }
    f.push_back(line.substr(start));
    if (f.size() != 8) throw Error("bench CSV line " + std::to_string(line_no) + ": expected 8 fields");
    auto num = [&](std::string_view s, auto& out) {
      const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
      if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw Error("bench CSV line " + std::to_string(line_no) + ": bad number '" +
                    std::string(s) + "'");
      }
    };
    BenchRecord r;
    r.algo = f[0];
    r.image = f[1];
    num(f[2], r.width);
    num(f[3], r.height);
    num(f[4], r.runs);
    num(f[5], r.min_ms);
    num(f[6], r.max_ms);
    num(f[7], r.mean_ms);
    records.push_back(std::move(r));
  }
  return records;
}

std::string timing_table_markdown(const std::vector<BenchRecord>& records) {
  std::vector<AlgoId> cols;
  for (const AlgoId id : kAllAlgos) {
    for (const auto& r : records) {
      if (algo_rank(r.algo) == static_cast<int>(id)) {
        cols.push_back(id);
        break;
      }
    }
  }
  std::string out = "| Images | |";
  std::string rule = "|---|---|";
  for (const AlgoId id : cols) {
    out += " " + std::string(display_name(id)) + " |";
    rule += "---:|";
  }
  out += "\n" + rule + "\n";
  for (const auto& key : groups_of(records)) {
    const auto& [image, w, h] = key;
    const char* stats[] = {"min", "max", "mean"};
    for (int s = 0; s < 3; ++s) {
      out += s == 0 ? "| " + image + " (" + size_label(w, h) + ") | " : std::string("| | ");
      out += std::string(stats[s]) + " |";
      for (const AlgoId id : cols) {
        const BenchRecord* r = find_record(records, key, id);
        if (r == nullptr) {
          out += " - |";
          continue;
        }
        const double v = s == 0 ? r->min_ms : s == 1 ? r->max_ms : r->mean_ms;
        out += " " + format_fixed(v, 3) + " |";
      }
      out += "\n";
    }
  }
  return out;
}

std::vector<Speedup> speedups(const std::vector<BenchRecord>& records) {
  std::vector<Speedup> out;
  for (const auto& key : groups_of(records)) {
    const BenchRecord* ours = find_record(records, key, AlgoId::optimized_uf);
    if (ours == nullptr || ours->mean_ms <= 0) continue;
    Speedup s{std::get<0>(key), std::get<1>(key), std::get<2>(key), {}, {}, {}};
    auto ratio = [&](AlgoId id) -> std::optional<double> {
      const BenchRecord* r = find_record(records, key, id);
      if (r == nullptr) return std::nullopt;
      return r->mean_ms / ours->mean_ms;
    };
    s.vs_le = ratio(AlgoId::label_equivalence);
    s.vs_uf = ratio(AlgoId::conventional_uf);
    s.vs_line = ratio(AlgoId::line_uf);
    out.push_back(std::move(s));
  }
  return out;
}

std::string speedup_table_markdown(const std::vector<BenchRecord>& records) {
  std::string out =
      "| Images | LE / ours | UF / ours | Line UF / ours |\n|---|---:|---:|---:|\n";
  auto cell = [](const std::optional<double>& v) {
    return v ? " " + format_fixed(*v, 2) + "x |" : std::string(" - |");
  };
  for (const auto& s : speedups(records)) {
    out += "| " + s.image + " (" + size_label(s.width, s.height) + ") |" + cell(s.vs_le) +
           cell(s.vs_uf) + cell(s.vs_line) + "\n";
  }
  return out;
}

std::string report(const std::vector<BenchRecord>& records, ReportFormat format) {
  if (format == ReportFormat::csv) return to_csv(records);
  std::uint32_t runs = records.empty() ? 0 : records.front().runs;
  std::string out = "## Execution time in milliseconds\n\n";
  out += "Labeling pipeline only (no file I/O, no verification); one warm-up run excluded; " +
         std::to_string(runs) + " timed runs per entry.\n\n";
  out += timing_table_markdown(records);
  out += "\n## Speedup of the optimized labeler (ratio of means)\n\n";
  out += speedup_table_markdown(records);
  return out;
}

}  // namespace ccl::bench
