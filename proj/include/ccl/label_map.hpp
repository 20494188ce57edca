// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

#include "ccl/dsf.hpp"
#include "ccl/grid.hpp"

namespace ccl {

/// Per-cell labels over global linear indices. While a labeler runs the array
/// is a disjoint-set parent array; after the final link every entry is the
/// smallest linear index of the cell's component.
struct LabelMap {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<CellIndex> labels;

  LabelMap() = default;
  LabelMap(std::uint32_t w, std::uint32_t h)
      : width(w), height(h), labels(static_cast<std::size_t>(w) * h) {}
  LabelMap(std::uint32_t w, std::uint32_t h, std::vector<CellIndex> l)
      : width(w), height(h), labels(std::move(l)) {}

  static LabelMap identity(std::uint32_t w, std::uint32_t h) {
    return {w, h, dsf::make_identity(static_cast<std::size_t>(w) * h)};
  }

  std::size_t size() const noexcept { return labels.size(); }
  std::span<CellIndex> span() noexcept { return labels; }
  std::span<const CellIndex> span() const noexcept { return labels; }
  CellIndex operator[](std::size_t i) const noexcept { return labels[i]; }

  friend bool operator==(const LabelMap&, const LabelMap&) = default;
};

/// Counters filled in by the labelers when a pointer is passed. Safe to update
/// from concurrently running phases.
struct Instrumentation {
  dsf::PathStats local_union;          // finds issued by the local union phases
  dsf::PathStats local_link;           // finds issued by the local-to-global conversion
  std::uint64_t global_merge_items = 0;   // work items launched by the global merge
  std::uint64_t global_merge_unions = 0;  // union_min calls issued by the global merge
  std::uint64_t iterations = 0;           // scan passes (multi-pass labelers)

  void add_local(const dsf::PathStats& s) noexcept { add(local_union, s); }
  void add_link(const dsf::PathStats& s) noexcept { add(local_link, s); }
  void add_global_unions(std::uint64_t n) noexcept {
    std::atomic_ref<std::uint64_t>(global_merge_unions).fetch_add(n, std::memory_order_relaxed);
  }

 private:
  static void add(dsf::PathStats& into, const dsf::PathStats& s) noexcept {
    std::atomic_ref<std::uint64_t>(into.finds).fetch_add(s.finds, std::memory_order_relaxed);
    std::atomic_ref<std::uint64_t>(into.steps).fetch_add(s.steps, std::memory_order_relaxed);
  }
};

}  // namespace ccl
