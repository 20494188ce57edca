// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Union-find labeling with coarse local labeling and boundary-only global merge.
//
//   1. local merge (blocked launch, one thread per cell):
//        init -> row scan -> column scan -> row-column unify -> local union
//        (left, then up) -> local-to-global label conversion
//   2. boundary merge (flat launch of max(P_x, P_y) threads): union each cell on
//      a block's left/top edge with its neighbour across the edge
//   3. link: every cell takes its root
//
// The scan/unify steps give each cell a label that is already close to its
// local root, so the union-find chains walked in step 1 are short.

#include <cstdint>

#include "ccl/engine.hpp"
#include "ccl/grid.hpp"
#include "ccl/label_map.hpp"

namespace ccl::optimized {

using engine::BlockConfig;
using engine::BlockScratch;
using engine::ExecOptions;
using engine::ThreadCtx;

// Scratch layout of the local merge: label_sm then dBuff_sm, bx*by words each.
inline constexpr std::size_t kLabelBuf = 0;
inline constexpr std::size_t kPixelBuf = 1;

engine::ScratchSpec local_scratch_spec(BlockConfig cfg);

// Single-thread bodies of the local-merge phases. Callers run them through
// engine::run_blocked; the engine supplies the barrier between consecutive ones.
// Defined inline so the sequential runner can fold them into its loop.
inline void init_local_labels(const ThreadCtx& ctx, BlockScratch& s, const Image& img) {
  s[kLabelBuf].store(ctx.tid, ctx.tid);
  s[kPixelBuf].store(ctx.tid, img[ctx.cell]);
}

inline void row_scan(const ThreadCtx& ctx, BlockScratch& s) {
  if (ctx.thread_x == 0) return;
  const auto& pix = s[kPixelBuf];
  const auto& lab = s[kLabelBuf];
  // Select rather than branch: on noisy input the comparison is unpredictable.
  const bool same = pix.load(ctx.tid) == pix.load(ctx.tid - 1);
  lab.store(ctx.tid, same ? lab.load(ctx.tid - 1) : lab.load(ctx.tid));
}

inline void column_scan(const ThreadCtx& ctx, BlockScratch& s) {
  if (ctx.thread_y == 0) return;
  const std::uint32_t up = ctx.tid - ctx.bx();
  const auto& pix = s[kPixelBuf];
  const auto& lab = s[kLabelBuf];
  const bool same = pix.load(ctx.tid) == pix.load(up);
  lab.store(ctx.tid, same ? lab.load(up) : lab.load(ctx.tid));
}

inline void row_column_unify(const ThreadCtx& ctx, BlockScratch& s) {
  const auto& lab = s[kLabelBuf];
  std::uint32_t temp = ctx.tid;
  for (std::uint32_t next = lab.load(temp); next != temp; next = lab.load(temp)) {
    temp = next;
    lab.store(ctx.tid, temp);
  }
}

inline void local_union_left(const ThreadCtx& ctx, BlockScratch& s, bool checked,
                             dsf::PathStats* stats) {
  if (ctx.thread_x == 0) return;
  const auto& pix = s[kPixelBuf];
  if (pix.load(ctx.tid) != pix.load(ctx.tid - 1)) return;
  const auto labels = s[kLabelBuf].span();
  if (checked) {
    dsf::union_min(labels, ctx.tid, ctx.tid - 1, stats);
  } else {
    dsf::union_min_unchecked(labels, ctx.tid, ctx.tid - 1, stats);
  }
}

inline void local_union_up(const ThreadCtx& ctx, BlockScratch& s, bool checked,
                           dsf::PathStats* stats) {
  if (ctx.thread_y == 0) return;
  const std::uint32_t up = ctx.tid - ctx.bx();
  const auto& pix = s[kPixelBuf];
  if (pix.load(ctx.tid) != pix.load(up)) return;
  const auto labels = s[kLabelBuf].span();
  if (checked) {
    dsf::union_min(labels, ctx.tid, up, stats);
  } else {
    dsf::union_min_unchecked(labels, ctx.tid, up, stats);
  }
}

inline void local_to_global(const ThreadCtx& ctx, BlockScratch& s, LabelMap& out, bool checked,
                            dsf::PathStats* stats = nullptr) {
  const auto labels = s[kLabelBuf].span();
  const std::uint32_t root =
      checked ? dsf::find(labels, ctx.tid, stats) : dsf::find_root(labels, ctx.tid, stats);
  // Local tids are row-major within the block: x = root mod bx, y = root div bx.
  const std::uint32_t gx = ctx.block_x * ctx.bx() + root % ctx.bx();
  const std::uint32_t gy = ctx.block_y * ctx.by() + root / ctx.bx();
  out.labels[ctx.cell] = gx + gy * ctx.plan->width;
}

/// Checked-mode audit run by thread 0 after row_column_unify: every label is
/// <= its tid and names an in-block cell of the same 4-connected region.
void audit_coarse_labels(const ThreadCtx& ctx, BlockScratch& s);
/// Checked-mode audit run by thread 0 after the local union: the root of every
/// thread is the smallest tid of its in-block region.
void audit_local_roots(const ThreadCtx& ctx, BlockScratch& s);

struct LocalMergeOptions {
  bool coarse = true;  // false gives the plain block-wise union-find local merge
};

/// The local-merge kernel as a phase program writing `out`.
engine::PhaseProgram local_merge_program(const Image& img, LabelMap& out,
                                         const LocalMergeOptions& local, const ExecOptions& opts,
                                         Instrumentation* instr);

/// Runs the local merge over the whole image.
engine::RunStats local_merge(const Image& img, BlockConfig cfg, LabelMap& out,
                             const LocalMergeOptions& local, const ExecOptions& opts,
                             Instrumentation* instr = nullptr);

/// Boundary-cell counts for an N x M image and a bx x by block:
///   P_x = floor(N / bx) * M,  P_y = floor(M / by) * N.
struct BoundaryCounts {
  std::uint64_t px = 0;
  std::uint64_t py = 0;
  std::uint64_t launch() const noexcept { return px > py ? px : py; }
};

BoundaryCounts boundary_cell_counts(std::uint64_t width, std::uint64_t height, std::uint32_t bx,
                                    std::uint32_t by);

/// Cells handled by boundary-merge thread `id`.
struct BoundaryTask {
  bool vertical_valid = false;    // cell whose left neighbour is across a block edge
  CellIndex vertical = 0;
  bool horizontal_valid = false;  // cell whose upper neighbour is across a block edge
  CellIndex horizontal = 0;
};
BoundaryTask boundary_task(std::uint64_t id, std::uint32_t width, std::uint32_t height,
                           BlockConfig cfg) noexcept;

/// Unions cells on block edges with their neighbours across the edge.
/// Returns the number of work items launched (max(P_x, P_y)).
std::uint64_t boundary_merge(const Image& img, BlockConfig cfg, LabelMap& labels,
                             const ExecOptions& opts = {}, Instrumentation* instr = nullptr);

/// Final link: every cell takes the root of its class.
void link_flatten(LabelMap& labels, const ExecOptions& opts = {});

LabelMap label_optimized(const Image& img, BlockConfig cfg = engine::kDefaultBlock,
                         const ExecOptions& opts = {}, Instrumentation* instr = nullptr);

}  // namespace ccl::optimized
