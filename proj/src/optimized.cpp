// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "ccl/optimized.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace ccl::optimized {
namespace {

std::uint32_t block_extent_x(const ThreadCtx& ctx) {
  return std::min(ctx.bx(), ctx.plan->width - ctx.block_x * ctx.bx());
}

std::uint32_t block_extent_y(const ThreadCtx& ctx) {
  return std::min(ctx.by(), ctx.plan->height - ctx.block_y * ctx.by());
}

// Smallest tid of each in-block 4-connected equal-pixel region, by BFS over
// the block's pixel scratch. Out-of-guard tids map to kNone.
constexpr std::uint32_t kNone = 0xFFFFFFFFu;

std::vector<std::uint32_t> block_regions(const ThreadCtx& ctx, BlockScratch& s) {
  const std::uint32_t bx = ctx.bx();
  const std::uint32_t ex = block_extent_x(ctx);
  const std::uint32_t ey = block_extent_y(ctx);
  const auto& pix = s[kPixelBuf];
  std::vector<std::uint32_t> region(ctx.plan->cfg.threads(), kNone);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t ty = 0; ty < ey; ++ty) {
    for (std::uint32_t tx = 0; tx < ex; ++tx) {
      const std::uint32_t seed = tx + ty * bx;
      if (region[seed] != kNone) continue;
      region[seed] = seed;
      queue.assign(1, seed);
      while (!queue.empty()) {
        const std::uint32_t t = queue.back();
        queue.pop_back();
        const std::uint32_t x = t % bx;
        const std::uint32_t y = t / bx;
        const std::uint32_t v = pix.load(t);
        auto visit = [&](std::uint32_t u) {
          if (region[u] == kNone && pix.load(u) == v) {
            region[u] = seed;
            queue.push_back(u);
          }
        };
        if (x > 0) visit(t - 1);
        if (x + 1 < ex) visit(t + 1);
        if (y > 0) visit(t - bx);
        if (y + 1 < ey) visit(t + bx);
      }
    }
  }
  return region;
}

std::string block_name(const ThreadCtx& ctx) {
  return "block (" + std::to_string(ctx.block_x) + ", " + std::to_string(ctx.block_y) + ")";
}

}  // namespace

engine::ScratchSpec local_scratch_spec(BlockConfig cfg) {
  return {{cfg.threads(), cfg.threads()}};
}

void audit_coarse_labels(const ThreadCtx& ctx, BlockScratch& s) {
  if (ctx.tid != 0) return;
  const auto region = block_regions(ctx, s);
  const auto& lab = s[kLabelBuf];
  for (std::uint32_t t = 0; t < region.size(); ++t) {
    if (region[t] == kNone) continue;
    const std::uint32_t l = lab.load(t);
    if (l > t || region[l] != region[t]) {
      throw Error("coarse labeling unsound in " + block_name(ctx) + ": tid " + std::to_string(t) +
                  " labelled " + std::to_string(l));
    }
  }
}

void audit_local_roots(const ThreadCtx& ctx, BlockScratch& s) {
  if (ctx.tid != 0) return;
  const auto region = block_regions(ctx, s);
  const auto labels = s[kLabelBuf].span();
  for (std::uint32_t t = 0; t < region.size(); ++t) {
    if (region[t] == kNone) continue;
    const std::uint32_t root = dsf::find_root(labels, t);
    if (root != region[t]) {
      throw Error("local union incomplete in " + block_name(ctx) + ": tid " + std::to_string(t) +
                  " has root " + std::to_string(root) + ", expected " + std::to_string(region[t]));
    }
  }
}

engine::PhaseProgram local_merge_program(const Image& img, LabelMap& out,
                                         const LocalMergeOptions& local, const ExecOptions& opts,
                                         Instrumentation* instr) {
  const bool checked = opts.checked();
  engine::PhaseProgram program;
  program.emplace_back(
      [&img](const ThreadCtx& ctx, BlockScratch& s) { init_local_labels(ctx, s, img); });
  if (local.coarse) {
    program.emplace_back(row_scan);
    program.emplace_back(column_scan);
    program.emplace_back(row_column_unify);
    if (checked) program.emplace_back(audit_coarse_labels);
  }
  auto with_stats = [instr, checked](auto body) {
    return [instr, checked, body](const ThreadCtx& ctx, BlockScratch& s) {
      if (instr == nullptr) {
        body(ctx, s, checked, nullptr);
        return;
      }
      dsf::PathStats stats;
      body(ctx, s, checked, &stats);
      instr->add_local(stats);
    };
  };
  program.emplace_back(with_stats(local_union_left));
  program.emplace_back(with_stats(local_union_up));
  if (checked) program.emplace_back(audit_local_roots);
  program.emplace_back([&out, checked, instr](const ThreadCtx& ctx, BlockScratch& s) {
    if (instr == nullptr) {
      local_to_global(ctx, s, out, checked);
      return;
    }
    dsf::PathStats stats;
    local_to_global(ctx, s, out, checked, &stats);
    instr->add_link(stats);
  });
  return program;
}

engine::RunStats local_merge(const Image& img, BlockConfig cfg, LabelMap& out,
                             const LocalMergeOptions& local, const ExecOptions& opts,
                             Instrumentation* instr) {
  const auto plan = engine::GridPlan::make(img.width(), img.height(), cfg);
  if (out.size() != img.size()) out = LabelMap(img.width(), img.height());
  if (instr != nullptr) {
    return engine::run_blocked(plan, local_scratch_spec(cfg),
                               local_merge_program(img, out, local, opts, instr), opts);
  }
  const bool checked = opts.checked();
  auto init = [&img](const ThreadCtx& ctx, BlockScratch& s) { init_local_labels(ctx, s, img); };
  auto left = [checked](const ThreadCtx& ctx, BlockScratch& s) {
    local_union_left(ctx, s, checked, nullptr);
  };
  auto up = [checked](const ThreadCtx& ctx, BlockScratch& s) {
    local_union_up(ctx, s, checked, nullptr);
  };
  auto to_global = [&out, checked](const ThreadCtx& ctx, BlockScratch& s) {
    local_to_global(ctx, s, out, checked);
  };
  if (local.coarse) {
    // Lambdas rather than function references so the calls inline.
    auto rows = [](const ThreadCtx& ctx, BlockScratch& s) { row_scan(ctx, s); };
    auto cols = [](const ThreadCtx& ctx, BlockScratch& s) { column_scan(ctx, s); };
    auto unify = [](const ThreadCtx& ctx, BlockScratch& s) { row_column_unify(ctx, s); };
    return engine::run_blocked_static(plan, local_scratch_spec(cfg), opts, init, rows, cols, unify,
                                      left, up, to_global);
  }
  return engine::run_blocked_static(plan, local_scratch_spec(cfg), opts, init, left, up, to_global);
}

BoundaryCounts boundary_cell_counts(std::uint64_t width, std::uint64_t height, std::uint32_t bx,
                                    std::uint32_t by) {
  if (bx == 0 || by == 0) throw engine::EngineError("block dimensions must be positive");
  return {(width / bx) * height, (height / by) * width};
}

// Thread id -> cells. Vertical edges: with K = floor(N / bx) edge columns per
// row, id covers column ((id mod K) + 1) * bx of row id div K. Horizontal edges:
// id covers x = id mod N of edge row ((id div N) + 1) * by. Edges at x = 0 and
// y = 0 have no neighbour and are skipped by starting at the first interior
// edge; the last slot is then past the image and guarded out.
BoundaryTask boundary_task(std::uint64_t id, std::uint32_t width, std::uint32_t height,
                           BlockConfig cfg) noexcept {
  BoundaryTask task;
  const std::uint64_t edge_cols = width / cfg.bx;
  if (edge_cols > 0 && id < edge_cols * height) {
    const std::uint64_t x = (id % edge_cols + 1) * cfg.bx;
    const std::uint64_t y = id / edge_cols;
    if (x < width) {
      task.vertical_valid = true;
      task.vertical = static_cast<CellIndex>(x + y * width);
    }
  }
  const std::uint64_t edge_rows = height / cfg.by;
  if (edge_rows > 0 && id < edge_rows * width) {
    const std::uint64_t x = id % width;
    const std::uint64_t y = (id / width + 1) * cfg.by;
    if (y < height) {
      task.horizontal_valid = true;
      task.horizontal = static_cast<CellIndex>(x + y * width);
    }
  }
  return task;
}

std::uint64_t boundary_merge(const Image& img, BlockConfig cfg, LabelMap& labels,
                             const ExecOptions& opts, Instrumentation* instr) {
  cfg.validate();
  const std::uint32_t width = img.width();
  const std::uint32_t height = img.height();
  const auto counts = boundary_cell_counts(width, height, cfg.bx, cfg.by);
  const auto parent = labels.span();
  const bool checked = opts.checked();
  auto unite = [&](CellIndex a, CellIndex b) {
    if (checked) {
      dsf::union_min(parent, a, b);
    } else {
      dsf::union_min_unchecked(parent, a, b);
    }
    if (instr != nullptr) instr->add_global_unions(1);
  };
  const std::uint64_t launched = engine::run_flat(
      counts.launch(),
      [&](std::uint64_t id) {
        const BoundaryTask task = boundary_task(id, width, height, cfg);
        if (task.vertical_valid && img[task.vertical] == img[task.vertical - 1]) {
          unite(task.vertical, task.vertical - 1);
        }
        if (task.horizontal_valid && img[task.horizontal] == img[task.horizontal - width]) {
          unite(task.horizontal, task.horizontal - width);
        }
      },
      opts);
  if (instr != nullptr) instr->global_merge_items = launched;
  return launched;
}

void link_flatten(LabelMap& labels, const ExecOptions& opts) {
  const auto parent = labels.span();
  if (opts.order.kind == engine::OrderKind::sequential) {
    dsf::flatten(parent);
    return;
  }
  engine::run_flat(
      parent.size(),
      [parent](std::uint64_t i) {
        const auto cell = static_cast<CellIndex>(i);
        const CellIndex root = dsf::find_root(parent, cell);
        std::atomic_ref<CellIndex>(parent[cell]).store(root, std::memory_order_relaxed);
      },
      opts);
}

LabelMap label_optimized(const Image& img, BlockConfig cfg, const ExecOptions& opts,
                         Instrumentation* instr) {
  LabelMap labels(img.width(), img.height());
  local_merge(img, cfg, labels, LocalMergeOptions{true}, opts, instr);
  boundary_merge(img, cfg, labels, opts, instr);
  link_flatten(labels, opts);
  return labels;
}

}  // namespace ccl::optimized
