// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "ccl/baselines.hpp"

#include <atomic>
#include <limits>
#include <vector>

#include "ccl/optimized.hpp"
#include "ccl/simd.hpp"

namespace ccl::baselines {

using engine::BlockConfig;
using engine::ExecOptions;

LabelMap flood_fill_oracle(const Image& img) {
  constexpr CellIndex kUnset = std::numeric_limits<CellIndex>::max();
  const std::uint32_t w = img.width();
  const std::uint32_t h = img.height();
  LabelMap out(w, h, std::vector<CellIndex>(img.size(), kUnset));
  std::vector<CellIndex> queue;
  queue.reserve(img.size());
  // Seeds are taken in index order, so every component gets its minimum index.
  for (CellIndex seed = 0; seed < img.size(); ++seed) {
    if (out.labels[seed] != kUnset) continue;
    const Pixel value = img[seed];
    out.labels[seed] = seed;
    queue.clear();
    queue.push_back(seed);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const CellIndex c = queue[head];
      const std::uint32_t x = c % w;
      const std::uint32_t y = c / w;
      auto visit = [&](CellIndex n) {
        if (out.labels[n] == kUnset && img[n] == value) {
          out.labels[n] = seed;
          queue.push_back(n);
        }
      };
      if (x > 0) visit(c - 1);
      if (x + 1 < w) visit(c + 1);
      if (y > 0) visit(c - w);
      if (y + 1 < h) visit(c + w);
    }
  }
  return out;
}

namespace {

void atomic_min(CellIndex& slot, CellIndex value) noexcept {
  std::atomic_ref<CellIndex> ref(slot);
  CellIndex cur = ref.load(std::memory_order_relaxed);
  while (value < cur && !ref.compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
  }
}

}  // namespace

LabelMap label_le(const Image& img, BlockConfig cfg, const ExecOptions& opts,
                  Instrumentation* instr) {
  cfg.validate();
  const std::uint32_t w = img.width();
  const std::uint32_t h = img.height();
  const std::size_t n = img.size();
  const auto& k = simd::kernels();
  LabelMap labels = LabelMap::identity(w, h);
  std::vector<CellIndex> ref = dsf::make_identity(n);
  std::vector<CellIndex> row_min(n);
  const Pixel* pix = img.pixels().data();
  CellIndex* lab = labels.labels.data();

  std::uint64_t iterations = 0;
  for (;;) {
    ++iterations;
    // Scan: each cell proposes the smallest label among itself and its
    // equal-valued neighbours as the new reference of its current label.
    std::atomic<bool> changed{false};
    engine::run_flat(
        h,
        [&](std::uint64_t y) {
          const std::size_t row = static_cast<std::size_t>(y) * w;
          simd::NeighborMinRow r;
          r.pix = pix + row;
          r.lab = lab + row;
          if (y > 0) {
            r.pix_up = r.pix - w;
            r.lab_up = r.lab - w;
          }
          if (y + 1 < h) {
            r.pix_down = r.pix + w;
            r.lab_down = r.lab + w;
          }
          r.out = row_min.data() + row;
          r.width = w;
          k.neighbor_min_row(r);
          bool row_changed = false;
          for (std::size_t i = row; i < row + w; ++i) {
            if (row_min[i] < lab[i]) {
              atomic_min(ref[lab[i]], row_min[i]);
              row_changed = true;
            }
          }
          if (row_changed) changed.store(true, std::memory_order_relaxed);
        },
        opts);
    if (!changed.load()) break;

    // Analysis: resolve each reference chain to its end.
    engine::run_flat(
        n,
        [&](std::uint64_t i) {
          std::span<CellIndex> chain(ref);
          CellIndex r = dsf::load(chain, static_cast<CellIndex>(i));
          for (CellIndex next = dsf::load(chain, r); next != r; next = dsf::load(chain, r)) r = next;
          std::atomic_ref<CellIndex>(ref[i]).store(r, std::memory_order_relaxed);
        },
        opts);

    // Relabel: label <- ref[label], one row per work item.
    engine::run_flat(
        h,
        [&](std::uint64_t y) {
          CellIndex* row = lab + static_cast<std::size_t>(y) * w;
          k.gather_u32(ref.data(), row, row, w);
        },
        opts);
  }
  if (instr != nullptr) instr->iterations = iterations;
  return labels;
}

LabelMap label_conventional_uf(const Image& img, BlockConfig cfg, const ExecOptions& opts,
                               Instrumentation* instr) {
  LabelMap labels(img.width(), img.height());
  optimized::local_merge(img, cfg, labels, optimized::LocalMergeOptions{false}, opts, instr);

  const std::uint32_t w = img.width();
  const bool checked = opts.checked();
  const auto parent = labels.span();
  auto unite = [&](CellIndex a, CellIndex b) {
    if (checked) {
      dsf::union_min(parent, a, b);
    } else {
      dsf::union_min_unchecked(parent, a, b);
    }
    if (instr != nullptr) instr->add_global_unions(1);
  };
  // One work item per cell; the guards select cells on a block's left/top edge.
  const std::uint64_t launched = engine::run_flat(
      img.size(),
      [&](std::uint64_t id) {
        const auto i = static_cast<CellIndex>(id);
        const std::uint32_t x = i % w;
        const std::uint32_t y = i / w;
        if (x > 0 && x % cfg.bx == 0 && img[i] == img[i - 1]) unite(i, i - 1);
        if (y > 0 && y % cfg.by == 0 && img[i] == img[i - w]) unite(i, i - w);
      },
      opts);
  if (instr != nullptr) instr->global_merge_items = launched;
  optimized::link_flatten(labels, opts);
  return labels;
}

void line_local_merge(const Image& img, BlockConfig cfg, LabelMap& labels,
                      const ExecOptions& opts) {
  if (cfg.by != 1) {
    throw engine::EngineError("line-based labeling needs a 1-row block, got " + cfg.to_string());
  }
  const auto plan = engine::GridPlan::make(img.width(), img.height(), cfg);
  const bool checked = opts.checked();
  if (labels.size() != img.size()) labels = LabelMap(img.width(), img.height());
  using engine::BlockScratch;
  using engine::ThreadCtx;
  const engine::PhaseProgram program{
      [&img](const ThreadCtx& ctx, BlockScratch& s) { optimized::init_local_labels(ctx, s, img); },
      [checked](const ThreadCtx& ctx, BlockScratch& s) {
        optimized::local_union_left(ctx, s, checked, nullptr);
      },
      [&labels, checked](const ThreadCtx& ctx, BlockScratch& s) {
        optimized::local_to_global(ctx, s, labels, checked);
      },
  };
  engine::run_blocked(plan, optimized::local_scratch_spec(cfg), program, opts);
}

std::uint64_t line_global_merge(const Image& img, BlockConfig cfg, LabelMap& labels,
                                const ExecOptions& opts, Instrumentation* instr) {
  const std::uint32_t w = img.width();
  const bool checked = opts.checked();
  const auto parent = labels.span();
  auto unite = [&](CellIndex a, CellIndex b) {
    if (checked) {
      dsf::union_min(parent, a, b);
    } else {
      dsf::union_min_unchecked(parent, a, b);
    }
    if (instr != nullptr) instr->add_global_unions(1);
  };
  const std::uint64_t launched = engine::run_flat(
      img.size(),
      [&](std::uint64_t id) {
        const auto i = static_cast<CellIndex>(id);
        const std::uint32_t x = i % w;
        const std::uint32_t y = i / w;
        if (y > 0 && img[i] == img[i - w]) unite(i, i - w);
        if (x > 0 && x % cfg.bx == 0 && img[i] == img[i - 1]) unite(i, i - 1);
      },
      opts);
  if (instr != nullptr) instr->global_merge_items = launched;
  return launched;
}

LabelMap label_line_uf(const Image& img, BlockConfig cfg, const ExecOptions& opts,
                       Instrumentation* instr) {
  LabelMap labels(img.width(), img.height());
  line_local_merge(img, cfg, labels, opts);
  line_global_merge(img, cfg, labels, opts, instr);
  optimized::link_flatten(labels, opts);
  return labels;
}

}  // namespace ccl::baselines
