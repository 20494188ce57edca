// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Bulk-synchronous block executor.
//
// A kernel is written as a PhaseProgram: the code between two barriers becomes
// one phase, and every in-guard thread of a block runs each phase once before
// any thread of that block starts the next one. Each block owns private
// scratch buffers (the analogue of shared memory). Within a phase the order of
// threads is chosen by the OrderPolicy, so kernels that only work for one
// particular interleaving show up as test failures under shuffled/parallel.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ccl/grid.hpp"

namespace ccl::engine {

class EngineError : public Error {
 public:
  using Error::Error;
};

/// Threads per block along x and y.
struct BlockConfig {
  static constexpr std::uint32_t kMaxThreads = 1024;

  std::uint32_t bx = 32;
  std::uint32_t by = 16;

  std::uint32_t threads() const noexcept { return bx * by; }
  /// Throws EngineError unless 1 <= bx, by and bx * by <= kMaxThreads.
  void validate() const;

  /// Parses "WxH", e.g. "32x16".
  static BlockConfig parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const BlockConfig&, const BlockConfig&) = default;
};

inline constexpr BlockConfig kDefaultBlock{32, 16};
inline constexpr BlockConfig kDefaultLineBlock{512, 1};

/// Launch geometry: ceil-divided grid of blocks covering a width x height domain.
struct GridPlan {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  BlockConfig cfg;
  std::uint32_t blocks_x = 0;
  std::uint32_t blocks_y = 0;

  static GridPlan make(std::uint32_t width, std::uint32_t height, BlockConfig cfg);
  std::uint64_t num_blocks() const noexcept {
    return static_cast<std::uint64_t>(blocks_x) * blocks_y;
  }
};

/// Identity of one emulated thread.
struct ThreadCtx {
  std::uint32_t block_x;
  std::uint32_t block_y;
  std::uint32_t thread_x;
  std::uint32_t thread_y;
  std::uint32_t tid;  // thread_x + thread_y * bx
  std::uint32_t x;    // global cell coordinates
  std::uint32_t y;
  CellIndex cell;     // x + y * width
  const GridPlan* plan;

  std::uint32_t bx() const noexcept { return plan->cfg.bx; }
  std::uint32_t by() const noexcept { return plan->cfg.by; }
  /// The guard every kernel applies before touching its cell.
  bool in_guard() const noexcept { return x < plan->width && y < plan->height; }
};

/// Context of thread `tid` in block `block` (row-major block id).
ThreadCtx thread_context(const GridPlan& plan, std::uint64_t block, std::uint32_t tid) noexcept;

enum class OrderKind { sequential, shuffled, parallel };

struct OrderPolicy {
  OrderKind kind = OrderKind::sequential;
  std::uint64_t seed = 0;    // shuffled
  unsigned workers = 1;      // parallel

  static OrderPolicy sequential() { return {}; }
  static OrderPolicy shuffled(std::uint64_t seed) { return {OrderKind::shuffled, seed, 1}; }
  static OrderPolicy parallel(unsigned workers) { return {OrderKind::parallel, 0, workers}; }

  /// "sequential", "shuffled:<seed>" or "parallel:<workers>".
  static OrderPolicy parse(std::string_view text);
  std::string to_string() const;
};

/// checked: scratch bounds, block isolation and per-kernel audits are
/// enforced. fast: none of those.
enum class Mode { fast, checked };

struct ExecOptions {
  OrderPolicy order;
  Mode mode = Mode::fast;

  bool checked() const noexcept { return mode == Mode::checked; }
};

/// Per-block buffer sizes, in 32-bit words. Each must be <= bx * by.
struct ScratchSpec {
  std::vector<std::size_t> buffers;
};

class BlockScratch;

/// One scratch buffer of the block currently being executed.
class ScratchBuffer {
 public:
  std::size_t size() const noexcept { return size_; }

  std::uint32_t load(std::size_t i) const {
    check(i);
    return std::atomic_ref<std::uint32_t>(data_[i]).load(std::memory_order_relaxed);
  }
  void store(std::size_t i, std::uint32_t v) const {
    check(i);
    std::atomic_ref<std::uint32_t>(data_[i]).store(v, std::memory_order_relaxed);
  }
  /// Whole buffer, for code that manages its own atomics (e.g. dsf::find).
  std::span<std::uint32_t> span() const {
    check_owner();
    return {data_, size_};
  }

 private:
  friend class BlockScratch;
  ScratchBuffer(std::uint32_t* data, std::size_t size, const BlockScratch* owner,
                std::uint64_t block_id, bool checked)
      : data_(data), size_(size), owner_(owner), block_id_(block_id), checked_(checked) {}

  void check(std::size_t i) const {
    if (checked_) [[unlikely]] verify(i);
  }
  void check_owner() const {
    if (checked_) [[unlikely]] verify_owner();
  }
  void verify(std::size_t i) const;
  void verify_owner() const;

  std::uint32_t* data_;
  std::size_t size_;
  const BlockScratch* owner_;
  std::uint64_t block_id_;
  bool checked_;
};

/// Private scratch memory of one block.
class BlockScratch {
 public:
  /// Sentinel written into every word before a block starts (checked mode).
  static constexpr std::uint32_t kPoison = 0xDEADBEEFu;

  BlockScratch(const ScratchSpec& spec, BlockConfig cfg, bool checked);
  BlockScratch(const BlockScratch&) = delete;
  BlockScratch& operator=(const BlockScratch&) = delete;

  /// View of buffer k, bound to the current block.
  const ScratchBuffer& operator[](std::size_t k) const {
    if (k >= views_.size()) [[unlikely]] undeclared(k);
    return views_[k];
  }
  std::size_t buffer_count() const noexcept { return views_.size(); }
  std::uint64_t block_id() const noexcept { return block_id_; }

  /// Rebinds the scratch to a new block, poisoning it in checked mode.
  void reset(std::uint64_t block_id);

 private:
  [[noreturn]] static void undeclared(std::size_t k);

  void bind_views();

  std::vector<std::uint32_t> storage_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> sizes_;
  std::vector<ScratchBuffer> views_;
  std::uint64_t block_id_ = 0;
  bool checked_;
};

namespace detail {
/// Scratch the calling worker is currently allowed to touch (checked mode).
const BlockScratch*& current_scratch() noexcept;
}  // namespace detail

using Phase = std::function<void(const ThreadCtx&, BlockScratch&)>;
using PhaseProgram = std::vector<Phase>;

struct RunStats {
  std::uint64_t blocks = 0;
  std::uint64_t invocations = 0;  // phase executions by in-guard threads
};

/// Runs every phase of `program` for every block of `plan`, with a barrier
/// between consecutive phases of a block. Out-of-guard threads execute nothing.
RunStats run_blocked(const GridPlan& plan, const ScratchSpec& scratch, const PhaseProgram& program,
                     const ExecOptions& opts = {});

/// run_blocked with the phases known at compile time. Sequential fast-mode runs
/// call the phases directly; every other policy goes through run_blocked.
template <typename... Phases>
RunStats run_blocked_static(const GridPlan& plan, const ScratchSpec& scratch_spec,
                            const ExecOptions& opts, Phases&&... phases) {
  if (opts.order.kind != OrderKind::sequential || opts.checked()) {
    return run_blocked(plan, scratch_spec, PhaseProgram{Phase(phases)...}, opts);
  }
  plan.cfg.validate();
  BlockScratch scratch(scratch_spec, plan.cfg, false);
  RunStats stats;
  stats.blocks = plan.num_blocks();
  if constexpr (sizeof...(Phases) == 0) return stats;
  for (std::uint64_t block = 0; block < stats.blocks; ++block) {
    scratch.reset(block);
    const ThreadCtx origin = thread_context(plan, block, 0);
    const std::uint32_t ex = std::min(plan.cfg.bx, plan.width - origin.x);
    const std::uint32_t ey = std::min(plan.cfg.by, plan.height - origin.y);
    auto each_thread = [&](auto& phase) {
      ThreadCtx ctx = origin;
      for (std::uint32_t ty = 0; ty < ey; ++ty) {
        ctx.thread_y = ty;
        ctx.y = origin.y + ty;
        for (std::uint32_t tx = 0; tx < ex; ++tx) {
          ctx.thread_x = tx;
          ctx.x = origin.x + tx;
          ctx.tid = tx + ty * plan.cfg.bx;
          ctx.cell = ctx.x + ctx.y * plan.width;
          phase(ctx, scratch);
        }
      }
    };
    (each_thread(phases), ...);
    stats.invocations += static_cast<std::uint64_t>(ex) * ey * sizeof...(Phases);
  }
  return stats;
}

namespace detail {

/// Visits [0, total) in a policy-dependent order (chunk order and in-chunk order
/// permuted for `shuffled`). Invokes visit(begin, end, permuted_offsets).
inline constexpr std::uint64_t kFlatChunk = 4096;

void shuffled_chunks(std::uint64_t total, std::uint64_t seed,
                     const std::function<void(std::uint64_t chunk_begin,
                                              std::span<const std::uint32_t> offsets)>& visit);

void run_workers(unsigned workers, const std::function<void(unsigned worker)>& body);

}  // namespace detail

/// Executes phase(id) once for each id in [0, total) in any order: a launch
/// with a 1D global thread id and no block structure. Returns `total`.
template <typename F>
std::uint64_t run_flat(std::uint64_t total, F&& phase, const ExecOptions& opts = {}) {
  switch (opts.order.kind) {
    case OrderKind::sequential:
      for (std::uint64_t id = 0; id < total; ++id) phase(id);
      break;
    case OrderKind::shuffled:
      detail::shuffled_chunks(total, opts.order.seed,
                              [&](std::uint64_t begin, std::span<const std::uint32_t> offsets) {
                                for (const std::uint32_t off : offsets) phase(begin + off);
                              });
      break;
    case OrderKind::parallel: {
      std::atomic<std::uint64_t> next{0};
      detail::run_workers(opts.order.workers, [&](unsigned) {
        for (;;) {
          const std::uint64_t begin = next.fetch_add(detail::kFlatChunk, std::memory_order_relaxed);
          if (begin >= total) break;
          const std::uint64_t end = std::min(total, begin + detail::kFlatChunk);
          for (std::uint64_t id = begin; id < end; ++id) phase(id);
        }
      });
      break;
    }
  }
  return total;
}

}  // namespace ccl::engine
