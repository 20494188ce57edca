// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "ccl/baselines.hpp"
#include "ccl/grid.hpp"
#include "ccl/label_io.hpp"

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(CCL_CLI_PATH) + " " + args + " >cli_out.txt 2>cli_err.txt";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("gen then verify") {
  REQUIRE(run("gen --pattern noise --size 128 --seed 1 --out cli_noise.pgm") == 0);
  CHECK(run("verify --input cli_noise.pgm") == 0);
  CHECK(slurp("cli_out.txt").find("optimized_uf [32x16]: ok") != std::string::npos);
  CHECK(run("verify --input cli_noise.pgm --algos le,ours --order shuffled:3 --checked") == 0);
  CHECK(run("--isa scalar verify --input cli_noise.pgm --algos le,uf,ours --block 8x8") == 0);
}

TEST_CASE("label writes raw little-endian labels") {
  REQUIRE(run("gen --pattern uniform --size 1x1 --out cli_one.pgm") == 0);
  REQUIRE(run("label --input cli_one.pgm --out-labels cli_one.raw") == 0);
  CHECK(slurp("cli_one.raw") == std::string(4, '\0'));

  REQUIRE(run("gen --pattern noise --size 40x30 --density 0.3 --seed 4 --out cli_n.pgm") == 0);
  REQUIRE(run("label --input cli_n.pgm --algo line_uf --out-labels cli_n.raw") == 0);
  const std::string raw = slurp("cli_n.raw");
  const std::vector<std::uint8_t> bytes(raw.begin(), raw.end());
  const auto labels = ccl::decode_raw_u32le(bytes, 40, 30);
  CHECK(labels == ccl::baselines::flood_fill_oracle(ccl::load_pgm("cli_n.pgm")));

  REQUIRE(run("label --input cli_n.pgm --out-labels cli_n.csv --out-format csv") == 0);
  CHECK(ccl::decode_csv(slurp("cli_n.csv")) == labels);
}

TEST_CASE("bench emits a report") {
  REQUIRE(run("bench --images noise --sizes 32 --runs 1 --format csv") == 0);
  CHECK(slurp("cli_out.txt").rfind("algo,image,width,height", 0) == 0);
  REQUIRE(run("bench --images noise --sizes 32 --runs 1") == 0);
  CHECK(slurp("cli_out.txt").find("Speedup") != std::string::npos);
}

TEST_CASE("errors exit nonzero with a message") {
  CHECK(run("label --input /no/such.pgm --out-labels x.raw") == 1);
  CHECK(slurp("cli_err.txt").find("error:") != std::string::npos);
  CHECK(run("gen --pattern plaid --size 4 --out x.pgm") == 1);
  CHECK(run("verify --input cli_noise.pgm --block 64x64") == 1);
  CHECK(run("verify --input cli_noise.pgm --order chaotic") == 1);
  CHECK(run("verify --input cli_noise.pgm --algos line_uf --block 8x8") == 1);
  CHECK(run("bench --runs 0") != 0);
  CHECK(run("") != 0);
}
