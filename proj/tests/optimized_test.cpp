// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <vector>

#include "ccl/baselines.hpp"
#include "ccl/optimized.hpp"
#include "test_support.hpp"

using namespace ccl;
using namespace ccl::optimized;
using engine::GridPlan;

namespace {

// Drives single phases of one block by hand, in a chosen thread order.
class BlockHarness {
 public:
  BlockHarness(const Image& img, BlockConfig cfg, std::uint64_t block = 0)
      : img_(img),
        plan_(GridPlan::make(img.width(), img.height(), cfg)),
        scratch_(local_scratch_spec(cfg), cfg, false),
        block_(block) {
    scratch_.reset(block);
    run([&](const ThreadCtx& ctx, BlockScratch& s) { init_local_labels(ctx, s, img_); });
  }

  void run(const std::function<void(const ThreadCtx&, BlockScratch&)>& phase,
           bool descending = false) {
    const std::uint32_t n = plan_.cfg.threads();
    for (std::uint32_t k = 0; k < n; ++k) {
      const auto ctx = engine::thread_context(plan_, block_, descending ? n - 1 - k : k);
      if (ctx.in_guard()) phase(ctx, scratch_);
    }
  }

  std::vector<std::uint32_t> labels() const {
    std::vector<std::uint32_t> out(plan_.cfg.threads());
    for (std::uint32_t t = 0; t < out.size(); ++t) out[t] = scratch_[kLabelBuf].load(t);
    return out;
  }

  std::vector<std::uint32_t> roots() {
    const auto span = scratch_[kLabelBuf].span();
    std::vector<std::uint32_t> out(plan_.cfg.threads());
    for (std::uint32_t t = 0; t < out.size(); ++t) out[t] = dsf::find_root(span, t);
    return out;
  }

  void local_union() {
    run([](const ThreadCtx& c, BlockScratch& s) { local_union_left(c, s, false, nullptr); });
    run([](const ThreadCtx& c, BlockScratch& s) { local_union_up(c, s, false, nullptr); });
  }

  BlockScratch& scratch() { return scratch_; }
  const GridPlan& plan() const { return plan_; }

 private:
  const Image& img_;
  GridPlan plan_;
  BlockScratch scratch_;
  std::uint64_t block_;
};

using Words = std::vector<std::uint32_t>;

}  // namespace

TEST_CASE("row scan copies the left label across equal runs") {
  const Image img = testing::image_from_rows({"AABBA"});
  BlockHarness h(img, {5, 1});
  h.run(row_scan);
  CHECK(h.labels() == Words{0, 0, 2, 2, 4});
}

TEST_CASE("column scan result depends on order, the unified labels do not") {
  const Image img(4, 4, Pixel{9});
  for (const bool descending : {false, true}) {
    BlockHarness h(img, {4, 4});
    h.run(row_scan);
    CHECK(h.labels() == Words{0, 0, 0, 0, 4, 4, 4, 4, 8, 8, 8, 8, 12, 12, 12, 12});
    h.run(column_scan, descending);
    if (descending) {
      CHECK(h.labels() == Words{0, 0, 0, 0, 0, 0, 0, 0, 4, 4, 4, 4, 8, 8, 8, 8});
    } else {
      CHECK(h.labels() == Words(16, 0));
    }
    h.run(row_column_unify, descending);
    CHECK(h.labels() == Words(16, 0));
  }
}

TEST_CASE("coarse labels leave U-shapes for the local union") {
  const Image img = testing::image_from_rows({"A.A", "A.A", "AAA"});
  BlockHarness h(img, {3, 3});
  h.run(row_scan);
  h.run(column_scan);
  h.run(row_column_unify);
  CHECK(h.labels() == Words{0, 1, 2, 0, 1, 2, 0, 0, 2});
  CHECK_NOTHROW(h.run(audit_coarse_labels));
  h.local_union();
  CHECK(h.roots() == Words{0, 1, 0, 0, 1, 0, 0, 0, 0});
  CHECK_NOTHROW(h.run(audit_local_roots));
}

TEST_CASE("coarse labels on stripes and checkerboard") {
  const Image stripes = generate(Pattern::stripes, 4, 4, {.stripe_period = 1});
  BlockHarness hs(stripes, {4, 4});
  hs.run(row_scan);
  hs.run(column_scan);
  hs.run(row_column_unify);
  for (std::uint32_t t = 0; t < 16; ++t) CHECK(hs.labels()[t] == t % 4);

  const Image board = generate(Pattern::checkerboard, 4, 4, {});
  BlockHarness hb(board, {4, 4});
  hb.run(row_scan);
  hb.run(column_scan);
  hb.run(row_column_unify);
  Words identity(16);
  std::iota(identity.begin(), identity.end(), 0u);
  CHECK(hb.labels() == identity);
  hb.local_union();
  CHECK(hb.roots() == identity);
}

TEST_CASE("audits reject corrupted scratch") {
  const Image img = testing::image_from_rows({"AB", "AB"});
  BlockHarness h(img, {2, 2});
  h.scratch()[kLabelBuf].store(3, 0);  // tid 3 is B, tid 0 is A
  CHECK_THROWS_AS(h.run(audit_coarse_labels), Error);
  BlockHarness h2(img, {2, 2});
  CHECK_THROWS_AS(h2.run(audit_local_roots), Error);  // no unions performed yet
}

TEST_CASE("local-to-global maps a block root to its image index") {
  const Image img(16, 8, Pixel{0});
  BlockHarness h(img, {4, 4}, 1);  // block (1, 0)
  h.scratch()[kLabelBuf].store(7, 5);
  LabelMap out(16, 8);
  const auto ctx = engine::thread_context(h.plan(), 1, 7);
  local_to_global(ctx, h.scratch(), out, false);
  CHECK(out[ctx.cell] == 21);
}

TEST_CASE("local merge of a uniform image labels each block by its corner") {
  const Image img(8, 8, Pixel{1});
  LabelMap out(8, 8);
  local_merge(img, {4, 4}, out, {}, {});
  for (std::uint32_t y = 0; y < 8; ++y) {
    for (std::uint32_t x = 0; x < 8; ++x) {
      CHECK(out[x + y * 8] == (x / 4) * 4 + (y / 4) * 32);
    }
  }
}

TEST_CASE("boundary cell counts") {
  auto c = boundary_cell_counts(4096, 4096, 32, 16);
  CHECK(c.px == 524288);
  CHECK(c.py == 1048576);
  CHECK(c.launch() == 1048576);
  c = boundary_cell_counts(512, 512, 512, 512);
  CHECK(c.px == 512);
  CHECK(c.py == 512);
  c = boundary_cell_counts(10, 10, 3, 3);
  CHECK(c.px == 30);
  CHECK(c.py == 30);
  c = boundary_cell_counts(5, 7, 8, 8);
  CHECK(c.launch() == 0);
  CHECK_THROWS_AS(boundary_cell_counts(4, 4, 0, 1), engine::EngineError);
}

TEST_CASE("property: boundary tasks cover every interior block edge exactly once") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const auto w = static_cast<std::uint32_t>(1 + rng.next_below(90));
    const auto h = static_cast<std::uint32_t>(1 + rng.next_below(90));
    const BlockConfig cfg{static_cast<std::uint32_t>(1 + rng.next_below(20)),
                          static_cast<std::uint32_t>(1 + rng.next_below(20))};
    CAPTURE(w);
    CAPTURE(h);
    CAPTURE(cfg.to_string());
    std::multiset<CellIndex> vertical;
    std::multiset<CellIndex> horizontal;
    const auto launch = boundary_cell_counts(w, h, cfg.bx, cfg.by).launch();
    for (std::uint64_t id = 0; id < launch; ++id) {
      const auto t = boundary_task(id, w, h, cfg);
      if (t.vertical_valid) vertical.insert(t.vertical);
      if (t.horizontal_valid) horizontal.insert(t.horizontal);
    }
    std::multiset<CellIndex> want_v;
    std::multiset<CellIndex> want_h;
    for (std::uint32_t y = 0; y < h; ++y) {
      for (std::uint32_t x = 0; x < w; ++x) {
        if (x > 0 && x % cfg.bx == 0) want_v.insert(x + y * w);
        if (y > 0 && y % cfg.by == 0) want_h.insert(x + y * w);
      }
    }
    REQUIRE(vertical == want_v);
    REQUIRE(horizontal == want_h);
  }
}

TEST_CASE("boundary merge unions exactly the equal pairs across block edges") {
  SUBCASE("uniform") {
    const Image img(8, 8, Pixel{3});
    CHECK(label_optimized(img, {4, 4}) == LabelMap(8, 8, Words(64, 0)));
  }
  SUBCASE("stripes aligned with the blocks need no unions") {
    const Image img = generate(Pattern::stripes, 8, 8, {.stripe_period = 4});
    Instrumentation instr;
    const LabelMap labels = label_optimized(img, {4, 8}, {}, &instr);
    CHECK(instr.global_merge_unions == 0);
    CHECK(labels == baselines::flood_fill_oracle(img));
  }
  SUBCASE("random images") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const Image img = testing::random_image(37, 29, 2, seed);
      const BlockConfig cfg{6, 5};
      std::uint64_t expect = 0;
      for (std::uint32_t y = 0; y < 29; ++y) {
        for (std::uint32_t x = 0; x < 37; ++x) {
          if (x > 0 && x % 6 == 0 && img.at(x, y) == img.at(x - 1, y)) ++expect;
          if (y > 0 && y % 5 == 0 && img.at(x, y) == img.at(x, y - 1)) ++expect;
        }
      }
      Instrumentation instr;
      label_optimized(img, cfg, {}, &instr);
      CHECK(instr.global_merge_unions == expect);
      CHECK(instr.global_merge_items == boundary_cell_counts(37, 29, 6, 5).launch());
    }
  }
}

TEST_CASE("link points every cell at its root") {
  for (const auto& opts : testing::all_exec_options()) {
    LabelMap labels(6, 1, Words{0, 0, 1, 3, 3, 2});
    link_flatten(labels, opts);
    CHECK(labels.labels == Words{0, 0, 0, 3, 3, 0});
  }
}

TEST_CASE("end to end against the oracle") {
  const Image img = generate(Pattern::noise, 257, 131, {.density = 0.5}, 9);
  const LabelMap truth = baselines::flood_fill_oracle(img);
  CHECK(truth.labels == testing::edge_oracle(img));
  for (const auto& opts : testing::all_exec_options()) {
    CAPTURE(opts.order.to_string());
    for (const BlockConfig cfg : {BlockConfig{32, 16}, BlockConfig{16, 16}, BlockConfig{8, 8},
                                  BlockConfig{64, 4}, BlockConfig{1, 1}, BlockConfig{257, 3}}) {
      CAPTURE(cfg.to_string());
      CHECK(label_optimized(img, cfg, opts) == truth);
    }
  }
}

TEST_CASE("property: random multi-level images") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const auto w = static_cast<std::uint32_t>(1 + rng.next_below(70));
    const auto h = static_cast<std::uint32_t>(1 + rng.next_below(70));
    const auto levels = static_cast<std::uint32_t>(1 + rng.next_below(4));
    const Image img = testing::random_image(w, h, levels, rng.next());
    const BlockConfig cfg{static_cast<std::uint32_t>(1 + rng.next_below(32)),
                          static_cast<std::uint32_t>(1 + rng.next_below(32))};
    const engine::ExecOptions opts{engine::OrderPolicy::shuffled(rng.next()), engine::Mode::checked};
    CAPTURE(w);
    CAPTURE(h);
    CAPTURE(cfg.to_string());
    const LabelMap labels = label_optimized(img, cfg, opts);
    REQUIRE(labels.labels == testing::edge_oracle(img));
  }
}

TEST_CASE("coarse labeling shortens the chains left after the local union") {
  // Fast mode only: the checked-mode audit walks every chain and compresses it.
  // The finds issued by the union phases themselves are reported by the
  // acceptance suite.
  for (const double density : {0.2, 0.5, 0.8}) {
    const Image img = generate(Pattern::noise, 256, 256, {.density = density}, 5);
    for (const auto& opts : testing::all_exec_options()) {
      if (opts.checked()) continue;
      Instrumentation coarse;
      Instrumentation plain;
      LabelMap a(256, 256);
      LabelMap b(256, 256);
      local_merge(img, {32, 16}, a, {true}, opts, &coarse);
      local_merge(img, {32, 16}, b, {false}, opts, &plain);
      CHECK(a == b);
      CAPTURE(density);
      CAPTURE(opts.order.to_string());
      CHECK(coarse.local_link.finds == img.size());
      CHECK(coarse.local_link.mean() < plain.local_link.mean());
    }
  }
}
