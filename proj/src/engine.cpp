// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "ccl/engine.hpp"

#include <barrier>
#include <charconv>
#include <numeric>

namespace ccl::engine {
namespace {

template <typename T>
T parse_uint(std::string_view text, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw EngineError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

// Fisher-Yates over `items` driven by SplitMix64.
template <typename T>
void shuffle(std::vector<T>& items, SplitMix64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace

ThreadCtx thread_context(const GridPlan& plan, std::uint64_t block, std::uint32_t tid) noexcept {
  ThreadCtx ctx{};
  ctx.plan = &plan;
  ctx.block_x = static_cast<std::uint32_t>(block % plan.blocks_x);
  ctx.block_y = static_cast<std::uint32_t>(block / plan.blocks_x);
  ctx.tid = tid;
  ctx.thread_x = tid % plan.cfg.bx;
  ctx.thread_y = tid / plan.cfg.bx;
  ctx.x = ctx.block_x * plan.cfg.bx + ctx.thread_x;
  ctx.y = ctx.block_y * plan.cfg.by + ctx.thread_y;
  ctx.cell = ctx.in_guard() ? ctx.x + ctx.y * plan.width : 0;
  return ctx;
}

namespace {

// Keeps the thread-local isolation pointer scoped to one block.
class ScratchBinding {
 public:
  explicit ScratchBinding(const BlockScratch* s) : prev_(detail::current_scratch()) {
    detail::current_scratch() = s;
  }
  ~ScratchBinding() { detail::current_scratch() = prev_; }
  ScratchBinding(const ScratchBinding&) = delete;
  ScratchBinding& operator=(const ScratchBinding&) = delete;

 private:
  const BlockScratch* prev_;
};

// First exception raised by any worker; later ones are dropped.
class ErrorSlot {
 public:
  void capture() {
    std::lock_guard lock(mu_);
    if (!error_) error_ = std::current_exception();
    failed_.store(true, std::memory_order_relaxed);
  }
  bool failed() const noexcept { return failed_.load(std::memory_order_relaxed); }
  void rethrow() {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr error_;
  std::atomic<bool> failed_{false};
};

}  // namespace

void BlockConfig::validate() const {
  if (bx == 0 || by == 0) {
    throw EngineError("block dimensions must be positive, got " + to_string());
  }
  if (static_cast<std::uint64_t>(bx) * by > kMaxThreads) {
    throw EngineError("block " + to_string() + " exceeds " + std::to_string(kMaxThreads) +
                      " threads");
  }
}

BlockConfig BlockConfig::parse(std::string_view text) {
  const auto sep = text.find('x');
  if (sep == std::string_view::npos) {
    throw EngineError("block config must look like WxH, got '" + std::string(text) + "'");
  }
  BlockConfig cfg{parse_uint<std::uint32_t>(text.substr(0, sep), "block width"),
                  parse_uint<std::uint32_t>(text.substr(sep + 1), "block height")};
  cfg.validate();
  return cfg;
}

std::string BlockConfig::to_string() const {
  return std::to_string(bx) + "x" + std::to_string(by);
}

GridPlan GridPlan::make(std::uint32_t width, std::uint32_t height, BlockConfig cfg) {
  cfg.validate();
  if (width == 0 || height == 0) throw EngineError("grid dimensions must be positive");
  GridPlan plan;
  plan.width = width;
  plan.height = height;
  plan.cfg = cfg;
  plan.blocks_x = (width + cfg.bx - 1) / cfg.bx;
  plan.blocks_y = (height + cfg.by - 1) / cfg.by;
  return plan;
}

OrderPolicy OrderPolicy::parse(std::string_view text) {
  if (text == "sequential") return sequential();
  const auto sep = text.find(':');
  const auto head = text.substr(0, sep);
  if (sep != std::string_view::npos) {
    const auto arg = text.substr(sep + 1);
    if (head == "shuffled") return shuffled(parse_uint<std::uint64_t>(arg, "shuffle seed"));
    if (head == "parallel") {
      const auto workers = parse_uint<unsigned>(arg, "worker count");
      if (workers == 0) throw EngineError("worker count must be positive");
      return parallel(workers);
    }
  } else {
    if (head == "shuffled") return shuffled(0);
    if (head == "parallel") return parallel(std::max(1u, std::thread::hardware_concurrency()));
  }
  throw EngineError("unknown order policy '" + std::string(text) +
                    "' (expected sequential, shuffled:<seed> or parallel:<workers>)");
}

std::string OrderPolicy::to_string() const {
  switch (kind) {
    case OrderKind::sequential: return "sequential";
    case OrderKind::shuffled: return "shuffled:" + std::to_string(seed);
    case OrderKind::parallel: return "parallel:" + std::to_string(workers);
  }
  return "?";
}

const BlockScratch*& detail::current_scratch() noexcept {
  thread_local const BlockScratch* current = nullptr;
  return current;
}

void ScratchBuffer::verify(std::size_t i) const {
  verify_owner();
  if (i >= size_) {
    throw EngineError("scratch index " + std::to_string(i) + " outside buffer of " +
                      std::to_string(size_) + " words");
  }
}

void ScratchBuffer::verify_owner() const {
  if (detail::current_scratch() != owner_ || owner_->block_id() != block_id_) {
    throw EngineError("block isolation violated: scratch of another block accessed");
  }
}

BlockScratch::BlockScratch(const ScratchSpec& spec, BlockConfig cfg, bool checked)
    : checked_(checked) {
  std::size_t total = 0;
  for (const std::size_t words : spec.buffers) {
    if (words > cfg.threads()) {
      throw EngineError("scratch buffer of " + std::to_string(words) + " words exceeds block " +
                        cfg.to_string() + " (" + std::to_string(cfg.threads()) + " threads)");
    }
    offsets_.push_back(total);
    sizes_.push_back(words);
    total += words;
  }
  storage_.assign(total, checked ? kPoison : 0u);
  bind_views();
}

void BlockScratch::bind_views() {
  views_.clear();
  for (std::size_t k = 0; k < offsets_.size(); ++k) {
    views_.push_back(ScratchBuffer(storage_.data() + offsets_[k], sizes_[k], this, block_id_, checked_));
  }
}

void BlockScratch::undeclared(std::size_t k) {
  throw EngineError("scratch buffer " + std::to_string(k) + " not declared");
}

void BlockScratch::reset(std::uint64_t block_id) {
  block_id_ = block_id;
  if (checked_) std::fill(storage_.begin(), storage_.end(), kPoison);
  for (auto& v : views_) v.block_id_ = block_id;
}

void detail::shuffled_chunks(
    std::uint64_t total, std::uint64_t seed,
    const std::function<void(std::uint64_t, std::span<const std::uint32_t>)>& visit) {
  SplitMix64 rng(seed);
  std::vector<std::uint64_t> chunks((total + kFlatChunk - 1) / kFlatChunk);
  std::iota(chunks.begin(), chunks.end(), std::uint64_t{0});
  shuffle(chunks, rng);
  std::vector<std::uint32_t> offsets;
  for (const std::uint64_t c : chunks) {
    const std::uint64_t begin = c * kFlatChunk;
    offsets.resize(static_cast<std::size_t>(std::min(kFlatChunk, total - begin)));
    std::iota(offsets.begin(), offsets.end(), 0u);
    shuffle(offsets, rng);
    visit(begin, offsets);
  }
}

void detail::run_workers(unsigned workers, const std::function<void(unsigned)>& body) {
  ErrorSlot errors;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          body(w);
        } catch (...) {
          errors.capture();
        }
      });
    }
  }
  errors.rethrow();
}

RunStats run_blocked(const GridPlan& plan, const ScratchSpec& scratch_spec,
                     const PhaseProgram& program, const ExecOptions& opts) {
  plan.cfg.validate();
  const bool checked = opts.checked();
  BlockScratch scratch(scratch_spec, plan.cfg, checked);
  const std::uint32_t threads = plan.cfg.threads();
  const std::uint64_t blocks = plan.num_blocks();

  RunStats stats;
  stats.blocks = blocks;
  if (program.empty()) return stats;

  if (opts.order.kind == OrderKind::sequential) {
    // Row-major tid order; contexts are stepped instead of rebuilt per thread.
    for (std::uint64_t block = 0; block < blocks; ++block) {
      scratch.reset(block);
      ScratchBinding bind(&scratch);
      const ThreadCtx origin = thread_context(plan, block, 0);
      const std::uint32_t ex = std::min(plan.cfg.bx, plan.width - origin.x);
      const std::uint32_t ey = std::min(plan.cfg.by, plan.height - origin.y);
      for (const Phase& phase : program) {
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
        stats.invocations += static_cast<std::uint64_t>(ex) * ey;
      }
    }
    return stats;
  }

  if (opts.order.kind == OrderKind::shuffled) {
    SplitMix64 rng(opts.order.seed);
    std::vector<std::uint64_t> block_order(blocks);
    std::iota(block_order.begin(), block_order.end(), std::uint64_t{0});
    shuffle(block_order, rng);
    std::vector<std::uint32_t> tids(threads);

    for (const std::uint64_t block : block_order) {
      scratch.reset(block);
      ScratchBinding bind(&scratch);
      for (const Phase& phase : program) {
        std::iota(tids.begin(), tids.end(), 0u);
        shuffle(tids, rng);
        for (const std::uint32_t tid : tids) {
          const ThreadCtx ctx = thread_context(plan, block, tid);
          if (!ctx.in_guard()) continue;
          phase(ctx, scratch);
          ++stats.invocations;
        }
      }
    }
    return stats;
  }

  // parallel: a team of workers executes each block together, splitting the
  // block's threads between them and meeting at a real barrier between phases.
  const unsigned workers = std::max(1u, opts.order.workers);
  std::barrier sync(static_cast<std::ptrdiff_t>(workers));
  ErrorSlot errors;
  std::vector<std::uint64_t> counts(workers, 0);
  detail::run_workers(workers, [&](unsigned w) {
    for (std::uint64_t block = 0; block < blocks; ++block) {
      if (w == 0) scratch.reset(block);
      sync.arrive_and_wait();
      ScratchBinding bind(&scratch);
      for (const Phase& phase : program) {
        for (std::uint32_t tid = w; tid < threads && !errors.failed(); tid += workers) {
          const ThreadCtx ctx = thread_context(plan, block, tid);
          if (!ctx.in_guard()) continue;
          try {
            phase(ctx, scratch);
          } catch (...) {
            errors.capture();
          }
          ++counts[w];
        }
        sync.arrive_and_wait();
      }
    }
  });
  errors.rethrow();
  stats.invocations = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  return stats;
}

}  // namespace ccl::engine
