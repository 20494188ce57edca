// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Disjoint-set forest over linear cell indices, stored as a plain parent array
// so the same code runs on a block's scratch labels and on the global label map.
//
// Union links the larger root under the smaller one. Because every link points
// downward, parent[i] <= i holds for every forest built from the identity, the
// final representative of a class is its minimum index, and that outcome does
// not depend on the order in which unions were applied.
//
// find and union_min may be called concurrently on the same array. All entry
// accesses go through std::atomic_ref; a root is swung with a CAS that only
// succeeds while it is still a root, and path halving only ever replaces a
// parent with one of its own ancestors.

#include <atomic>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ccl/grid.hpp"

namespace ccl::dsf {

using Label = CellIndex;
using ParentArray = std::vector<Label>;

/// Counts parent links followed by find; used to compare chain lengths.
struct PathStats {
  std::uint64_t finds = 0;
  std::uint64_t steps = 0;

  double mean() const noexcept {
    return finds == 0 ? 0.0 : static_cast<double>(steps) / static_cast<double>(finds);
  }
  PathStats& operator+=(const PathStats& o) noexcept {
    finds += o.finds;
    steps += o.steps;
    return *this;
  }
};

inline ParentArray make_identity(std::size_t n) {
  ParentArray p(n);
  std::iota(p.begin(), p.end(), Label{0});
  return p;
}

inline Label load(std::span<Label> parent, Label i) noexcept {
  return std::atomic_ref<Label>(parent[i]).load(std::memory_order_relaxed);
}

/// Root of i, halving the path on the way. No bounds check.
inline Label find_root(std::span<Label> parent, Label i, PathStats* stats = nullptr) noexcept {
  std::uint64_t steps = 0;
  Label cur = i;
  for (;;) {
    Label p = load(parent, cur);
    if (p == cur) break;
    ++steps;
    const Label gp = load(parent, p);
    if (gp == p) {
      cur = p;
      break;
    }
    ++steps;
    std::atomic_ref<Label>(parent[cur]).compare_exchange_weak(p, gp, std::memory_order_relaxed);
    cur = gp;
  }
  if (stats != nullptr) {
    ++stats->finds;
    stats->steps += steps;
  }
  return cur;
}

/// Joins the classes of a and b; the smaller root survives. Returns true when
/// this call performed the link. No bounds check.
inline bool union_min_unchecked(std::span<Label> parent, Label a, Label b,
                                PathStats* stats = nullptr) noexcept {
  for (;;) {
    a = find_root(parent, a, stats);
    b = find_root(parent, b, stats);
    if (a == b) return false;
    if (a < b) std::swap(a, b);
    Label expected = a;
    if (std::atomic_ref<Label>(parent[a]).compare_exchange_strong(
            expected, b, std::memory_order_acq_rel, std::memory_order_relaxed)) {
      return true;
    }
    // a stopped being a root under us; both roots are re-found.
  }
}

inline void check_index(std::span<const Label> parent, Label i) {
  if (i >= parent.size()) {
    throw Error("cell index " + std::to_string(i) + " out of range for forest of " +
                std::to_string(parent.size()) + " cells");
  }
}

inline Label find(std::span<Label> parent, Label i, PathStats* stats = nullptr) {
  check_index(parent, i);
  return find_root(parent, i, stats);
}

inline bool union_min(std::span<Label> parent, Label a, Label b, PathStats* stats = nullptr) {
  check_index(parent, a);
  check_index(parent, b);
  return union_min_unchecked(parent, a, b, stats);
}

/// parent[i] = find(i) for every i. Requires exclusive access.
inline void flatten(std::span<Label> parent) noexcept {
  for (Label i = 0; i < parent.size(); ++i) {
    const Label p = parent[i];
    // Entries below i are already final, so one hop suffices for p < i.
    parent[i] = p < i ? parent[p] : find_root(parent, p);
  }
}

inline std::size_t count_roots(std::span<const Label> parent) noexcept {
  std::size_t roots = 0;
  for (Label i = 0; i < parent.size(); ++i) roots += parent[i] == i;
  return roots;
}

}  // namespace ccl::dsf
