// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <atomic>
#include <mutex>
#include <optional>
#include <set>
#include <vector>

#include "ccl/baselines.hpp"
#include "ccl/engine.hpp"
#include "ccl/optimized.hpp"
#include "test_support.hpp"

using namespace ccl;
using namespace ccl::engine;

TEST_CASE("block config parsing and validation") {
  CHECK(BlockConfig::parse("32x16") == BlockConfig{32, 16});
  CHECK(BlockConfig::parse("1024x1") == BlockConfig{1024, 1});
  CHECK(BlockConfig{8, 4}.to_string() == "8x4");
  CHECK_THROWS_AS(BlockConfig::parse("0x4"), EngineError);
  CHECK_THROWS_AS(BlockConfig::parse("64x32"), EngineError);
  CHECK_THROWS_AS(BlockConfig::parse("32"), EngineError);
  CHECK_THROWS_AS(BlockConfig::parse("32x"), EngineError);
  CHECK_THROWS_AS(BlockConfig::parse("ax4"), EngineError);
  CHECK_THROWS_AS((BlockConfig{2048, 1}.validate()), EngineError);
}

TEST_CASE("order policy parsing") {
  CHECK(OrderPolicy::parse("sequential").kind == OrderKind::sequential);
  const auto s = OrderPolicy::parse("shuffled:42");
  CHECK(s.kind == OrderKind::shuffled);
  CHECK(s.seed == 42);
  const auto p = OrderPolicy::parse("parallel:3");
  CHECK(p.kind == OrderKind::parallel);
  CHECK(p.workers == 3);
  CHECK(OrderPolicy::parse(s.to_string()).seed == 42);
  CHECK_THROWS_AS(OrderPolicy::parse("parallel:0"), EngineError);
  CHECK_THROWS_AS(OrderPolicy::parse("random"), EngineError);
  CHECK_THROWS_AS(OrderPolicy::parse("shuffled:x"), EngineError);
}

TEST_CASE("grid plan covers the domain with ceil division") {
  const auto plan = GridPlan::make(33, 17, {8, 8});
  CHECK(plan.blocks_x == 5);
  CHECK(plan.blocks_y == 3);
  CHECK(plan.num_blocks() == 15);
  CHECK_THROWS_AS(GridPlan::make(0, 4, {8, 8}), EngineError);
}

TEST_CASE("every in-guard cell is owned by exactly one thread") {
  for (const auto& opts : testing::all_exec_options()) {
    const auto plan = GridPlan::make(13, 9, {4, 4});
    std::vector<std::atomic<int>> owners(13 * 9);
    const PhaseProgram program{[&](const ThreadCtx& ctx, BlockScratch&) {
      CHECK(ctx.cell == ctx.x + ctx.y * 13);
      CHECK(ctx.tid == ctx.thread_x + ctx.thread_y * 4);
      owners[ctx.cell].fetch_add(1);
    }};
    const auto stats = run_blocked(plan, {}, program, opts);
    CHECK(stats.blocks == 12);
    CHECK(stats.invocations == 13 * 9);
    for (const auto& o : owners) CHECK(o.load() == 1);
  }
}

TEST_CASE("identity phase on 8x8 with 4x4 blocks writes each cell once") {
  const auto plan = GridPlan::make(8, 8, {4, 4});
  std::vector<CellIndex> out(64, 0xFFFFFFFFu);
  const auto stats = run_blocked(
      plan, {}, {[&](const ThreadCtx& ctx, BlockScratch&) { out[ctx.cell] = ctx.cell; }});
  CHECK(stats.blocks == 4);
  CHECK(stats.invocations == 64);
  for (CellIndex i = 0; i < 64; ++i) CHECK(out[i] == i);
}

TEST_CASE("an empty program does nothing") {
  const auto plan = GridPlan::make(8, 8, {4, 4});
  const auto stats = run_blocked(plan, {{16}}, {});
  CHECK(stats.invocations == 0);
}

TEST_CASE("phases are separated by a barrier within each block") {
  // Phase 1 writes every scratch word; phase 2 reads the neighbour's word.
  // Without a barrier, some reads would see the previous block's values.
  for (const auto& opts : testing::all_exec_options()) {
    const auto plan = GridPlan::make(16, 16, {8, 4});
    std::vector<CellIndex> out(256);
    const PhaseProgram program{
        [](const ThreadCtx& ctx, BlockScratch& s) { s[0].store(ctx.tid, ctx.cell); },
        [&](const ThreadCtx& ctx, BlockScratch& s) {
          const std::uint32_t other = (ctx.tid + 5) % 32;
          out[ctx.cell] = s[0].load(other);
        },
    };
    run_blocked(plan, {{32}}, program, opts);
    for (std::uint64_t block = 0; block < plan.num_blocks(); ++block) {
      for (std::uint32_t tid = 0; tid < 32; ++tid) {
        const auto ctx = thread_context(plan, block, tid);
        CHECK(out[ctx.cell] == thread_context(plan, block, (tid + 5) % 32).cell);
      }
    }
  }
}

TEST_CASE("checked mode catches out-of-bounds scratch access") {
  const auto plan = GridPlan::make(4, 4, {4, 4});
  const PhaseProgram bad{[](const ThreadCtx& ctx, BlockScratch& s) { s[0].store(ctx.tid + 1, 1); }};
  CHECK_THROWS_AS(run_blocked(plan, {{16}}, bad, {{}, Mode::checked}), EngineError);
  CHECK_THROWS_AS(run_blocked(plan, {{16}}, bad, {OrderPolicy::parallel(3), Mode::checked}),
                  EngineError);
  const PhaseProgram undeclared{[](const ThreadCtx&, BlockScratch& s) { s[1].load(0); }};
  CHECK_THROWS_AS(run_blocked(plan, {{16}}, undeclared, {}), EngineError);
}

TEST_CASE("scratch larger than the block is rejected") {
  const auto plan = GridPlan::make(4, 4, {4, 4});
  CHECK_THROWS_AS(run_blocked(plan, {{17}}, {[](const ThreadCtx&, BlockScratch&) {}}), EngineError);
}

TEST_CASE("checked mode catches access to another block's scratch") {
  const auto plan = GridPlan::make(8, 4, {4, 4});
  std::optional<ScratchBuffer> leaked;
  std::mutex mu;
  const PhaseProgram program{[&](const ThreadCtx& ctx, BlockScratch& s) {
    std::lock_guard lock(mu);
    if (ctx.block_x == 0 && ctx.tid == 0) leaked.emplace(s[0]);
    if (ctx.block_x == 1 && ctx.tid == 0 && leaked) leaked->load(0);
  }};
  CHECK_THROWS_AS(run_blocked(plan, {{16}}, program, {{}, Mode::checked}), EngineError);
  leaked.reset();
  CHECK_NOTHROW(run_blocked(plan, {{16}}, program, {{}, Mode::fast}));
}

TEST_CASE("checked mode poisons scratch before each block") {
  const auto plan = GridPlan::make(8, 4, {4, 4});
  std::vector<std::uint32_t> seen(32);
  const PhaseProgram program{
      [&](const ThreadCtx& ctx, BlockScratch& s) {
        seen[ctx.cell] = s[0].load(ctx.tid);
        s[0].store(ctx.tid, 7);
      },
  };
  run_blocked(plan, {{16}}, program, {{}, Mode::checked});
  for (const auto v : seen) CHECK(v == BlockScratch::kPoison);
}

TEST_CASE("phase exceptions propagate out of parallel runs") {
  const auto plan = GridPlan::make(64, 64, {16, 16});
  const PhaseProgram program{[](const ThreadCtx& ctx, BlockScratch&) {
    if (ctx.cell == 1000) throw Error("boom");
  }};
  CHECK_THROWS_AS(run_blocked(plan, {}, program, {OrderPolicy::parallel(4)}), Error);
  CHECK_THROWS_AS(run_flat(5000, [](std::uint64_t id) { if (id == 4097) throw Error("boom"); },
                           {OrderPolicy::parallel(3)}),
                  Error);
}

TEST_CASE("run_flat visits every id exactly once") {
  CHECK(run_flat(0, [](std::uint64_t) { FAIL("no ids expected"); }) == 0);
  for (const auto& opts : testing::all_exec_options()) {
    const std::uint64_t n = 10007;
    std::vector<std::atomic<int>> hits(n);
    CHECK(run_flat(n, [&](std::uint64_t id) { hits[id].fetch_add(1); }, opts) == n);
    for (const auto& h : hits) REQUIRE(h.load() == 1);
  }
  std::atomic<std::uint64_t> sum{0};
  run_flat(1000000, [&](std::uint64_t id) { sum.fetch_add(id, std::memory_order_relaxed); },
           {OrderPolicy::parallel(8)});
  CHECK(sum.load() == 999999ULL * 1000000ULL / 2);
}

TEST_CASE("shuffled run_flat actually permutes, reproducibly") {
  std::vector<std::uint64_t> a;
  std::vector<std::uint64_t> b;
  run_flat(9000, [&](std::uint64_t id) { a.push_back(id); }, {OrderPolicy::shuffled(3)});
  run_flat(9000, [&](std::uint64_t id) { b.push_back(id); }, {OrderPolicy::shuffled(3)});
  CHECK(a == b);
  CHECK_FALSE(std::is_sorted(a.begin(), a.end()));
  CHECK(std::set<std::uint64_t>(a.begin(), a.end()).size() == 9000);
}

TEST_CASE("the local-merge kernel is insensitive to intra-phase order") {
  const Image img = generate(Pattern::noise, 77, 45, {.density = 0.5}, 8);
  LabelMap reference(img.width(), img.height());
  optimized::local_merge(img, {16, 8}, reference, {}, {});
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    LabelMap labels(img.width(), img.height());
    optimized::local_merge(img, {16, 8}, labels, {}, {OrderPolicy::shuffled(seed), Mode::checked});
    CHECK(labels == reference);
  }
  // After the full pipeline, every order equals the oracle.
  const LabelMap truth = baselines::flood_fill_oracle(img);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CHECK(optimized::label_optimized(img, {16, 8}, {OrderPolicy::shuffled(seed)}) == truth);
  }
}
