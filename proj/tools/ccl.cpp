// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: generate test images, label them, cross-check the
// labelers against the flood-fill oracle and run the timing harness.

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ccl/algorithms.hpp"
#include "ccl/baselines.hpp"
#include "ccl/bench.hpp"
#include "ccl/engine.hpp"
#include "ccl/grid.hpp"
#include "ccl/label_io.hpp"
#include "ccl/partition.hpp"
#include "ccl/simd.hpp"

namespace {

using namespace ccl;

struct Dims {
  std::uint32_t width;
  std::uint32_t height;
};

// "W" or "WxH".
Dims parse_dims(const std::string& text) {
  auto num = [&](std::string_view s) {
    std::uint32_t v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || s.empty() || v == 0) {
      throw Error("invalid size '" + text + "'");
    }
    return v;
  };
  const auto sep = text.find('x');
  if (sep == std::string::npos) {
    const auto n = num(text);
    return {n, n};
  }
  return {num(std::string_view(text).substr(0, sep)), num(std::string_view(text).substr(sep + 1))};
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for '" + path + "'");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

struct ExecFlags {
  std::string order = "sequential";
  bool checked = false;

  engine::ExecOptions options() const {
    return {engine::OrderPolicy::parse(order), checked ? engine::Mode::checked : engine::Mode::fast};
  }
};

void add_exec_flags(CLI::App* cmd, ExecFlags& flags) {
  cmd->add_option("--order", flags.order,
                  "Intra-phase thread order: sequential, shuffled:<seed>, parallel:<workers>");
  cmd->add_flag("--checked", flags.checked, "Enable scratch bounds/isolation checks and audits");
}

Image load_input(const std::string& path, const std::optional<int>& threshold) {
  Image img = load_pgm(path);
  if (threshold) {
    if (*threshold < 0 || *threshold > 255) throw Error("--binarize threshold must be 0..255");
    img = binarize(img, static_cast<Pixel>(*threshold));
  }
  return img;
}

std::vector<AlgoId> parse_algos(const std::vector<std::string>& names) {
  std::vector<AlgoId> algos;
  for (const auto& n : names) {
    if (n == "all") {
      algos.insert(algos.end(), kParallelAlgos.begin(), kParallelAlgos.end());
    } else {
      algos.push_back(parse_algo(n));
    }
  }
  return algos;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Connected-components labeling toolkit"};
  app.require_subcommand(1);
  std::string isa;
  app.add_option("--isa", isa, "Force a SIMD variant (scalar, avx2); default: best available");

  // gen
  auto* gen = app.add_subcommand("gen", "Write a synthetic test image as binary PGM");
  std::string pattern;
  std::string gen_size;
  double density = 0.5;
  std::uint64_t seed = 0;
  std::uint32_t period = 1;
  int fill = 0;
  std::string gen_out;
  gen->add_option("--pattern", pattern, "noise, stripes, checkerboard, uniform, spiral")->required();
  gen->add_option("--size", gen_size, "WxH")->required();
  gen->add_option("--density", density, "noise: probability of a 255 cell");
  gen->add_option("--seed", seed, "noise: PRNG seed");
  gen->add_option("--period", period, "stripes: band width");
  gen->add_option("--fill", fill, "uniform: pixel value")->check(CLI::Range(0, 255));
  gen->add_option("--out", gen_out, "Output PGM path")->required();

  // label
  auto* label = app.add_subcommand("label", "Label one image");
  std::string label_input;
  std::optional<int> label_threshold;
  std::string label_algo = "optimized_uf";
  std::string label_block;
  std::string label_out;
  std::string label_format = "raw-u32le";
  ExecFlags label_exec;
  label->add_option("--input", label_input, "Input PGM")->required();
  label->add_option("--binarize", label_threshold, "Threshold the input first (>= t -> 255)");
  label->add_option("--algo", label_algo, "Labeler id");
  label->add_option("--block", label_block, "Block size WxH (default per algorithm)");
  label->add_option("--out-labels", label_out, "Output path")->required();
  label->add_option("--out-format", label_format, "raw-u32le, csv or pgm-recolor");
  add_exec_flags(label, label_exec);

  // verify
  auto* verify = app.add_subcommand("verify", "Check labelers against the flood-fill oracle");
  std::string verify_input;
  std::optional<int> verify_threshold;
  std::vector<std::string> verify_algos{"all"};
  std::string verify_block;
  ExecFlags verify_exec;
  verify->add_option("--input", verify_input, "Input PGM")->required();
  verify->add_option("--binarize", verify_threshold, "Threshold the input first");
  verify->add_option("--algos", verify_algos, "Comma-separated labeler ids, or 'all'")
      ->delimiter(',');
  verify->add_option("--block", verify_block, "Block size WxH (default per algorithm)");
  add_exec_flags(verify, verify_exec);

  // bench
  auto* bench = app.add_subcommand("bench", "Time labelers (min/max/mean over repeated runs)");
  std::vector<std::string> bench_images{"noise"};
  std::vector<std::uint32_t> bench_sizes{512};
  std::uint32_t bench_runs = 100;
  std::vector<std::string> bench_algos{"all"};
  std::string bench_format = "md";
  std::string bench_block;
  std::string bench_out;
  std::string data_dir;
  ExecFlags bench_exec;
  bench->add_option("--images", bench_images,
                    "noise, cameraman, astronaut, spiral, ... or PGM paths")
      ->delimiter(',');
  bench->add_option("--sizes", bench_sizes, "Square image sizes, e.g. 512,1024")->delimiter(',');
  bench->add_option("--runs", bench_runs, "Timed runs per combination")->check(CLI::PositiveNumber);
  bench->add_option("--algos", bench_algos, "Comma-separated labeler ids, or 'all'")->delimiter(',');
  bench->add_option("--format", bench_format, "md or csv");
  bench->add_option("--block", bench_block, "Block size WxH for every labeler");
  bench->add_option("--out", bench_out, "Report path (default stdout)");
  bench->add_option("--data-dir", data_dir, "Directory holding cameraman.pgm / astronaut.pgm");
  add_exec_flags(bench, bench_exec);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!isa.empty()) {
      const auto parsed = simd::parse_isa(isa);
      if (!parsed) throw Error("unknown --isa '" + isa + "'");
      simd::set_active(*parsed);
    }

    if (gen->parsed()) {
      const Dims d = parse_dims(gen_size);
      PatternParams params;
      params.density = density;
      params.stripe_period = period;
      params.fill_value = static_cast<Pixel>(fill);
      save_pgm(generate(parse_pattern(pattern), d.width, d.height, params, seed), gen_out);
      return 0;
    }

    if (label->parsed()) {
      const Image img = load_input(label_input, label_threshold);
      const AlgoId algo = parse_algo(label_algo);
      const auto cfg = label_block.empty() ? default_block(algo)
                                           : engine::BlockConfig::parse(label_block);
      const auto format = parse_label_format(label_format);
      const LabelMap labels = run_algorithm(algo, img, cfg, label_exec.options());
      write_file(label_out, encode_labels(labels, format));
      return 0;
    }

    if (verify->parsed()) {
      const Image img = load_input(verify_input, verify_threshold);
      const LabelMap truth = baselines::flood_fill_oracle(img);
      const auto components = canonicalize(truth).components;
      std::cout << "oracle: " << img.width() << "x" << img.height() << ", " << components
                << " components\n";
      int mismatches = 0;
      for (const AlgoId algo : parse_algos(verify_algos)) {
        const auto cfg = verify_block.empty() ? default_block(algo)
                                              : engine::BlockConfig::parse(verify_block);
        const LabelMap labels = run_algorithm(algo, img, cfg, verify_exec.options());
        const auto diff = first_difference(labels, truth);
        const bool canonical = labels == truth;
        std::cout << to_string(algo) << " [" << cfg.to_string() << "]: ";
        if (diff) {
          const Coord c = img.coord(*diff);
          std::cout << "MISMATCH at cell " << *diff << " (" << c.x << ", " << c.y << ")\n";
          ++mismatches;
        } else if (!canonical) {
          std::cout << "partition ok, labels not in min-index form\n";
          ++mismatches;
        } else {
          std::cout << "ok\n";
        }
      }
      return mismatches == 0 ? 0 : 1;
    }

    if (bench->parsed()) {
      bench::BenchConfig cfg;
      cfg.algos = parse_algos(bench_algos);
      cfg.images = bench_images;
      cfg.sizes = bench_sizes;
      cfg.runs = bench_runs;
      cfg.exec = bench_exec.options();
      cfg.data_dir = data_dir;
      if (!bench_block.empty()) cfg.block = engine::BlockConfig::parse(bench_block);
      const auto format = bench::parse_report_format(bench_format);
      const auto result = bench::run_bench(cfg, &std::cerr);
      write_text(bench_out, bench::report(result.records, format));
      for (const auto& f : result.failures) {
        std::cerr << "verification failed: " << f.algo << " on " << f.image << " " << f.width
                  << "x" << f.height << ": " << f.message << "\n";
      }
      return result.failures.empty() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
