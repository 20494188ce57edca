// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "ccl/partition.hpp"

#include <string>
#include <unordered_map>

#include "ccl/simd.hpp"

namespace ccl {
namespace {

// Calls assign(i, first_cell_with_same_tag, is_new_class) for every cell.
template <typename F>
void for_each_class(const LabelMap& labels, F&& assign) {
  constexpr CellIndex kUnset = 0xFFFFFFFFu;
  const std::size_t n = labels.size();
  bool dense = true;
  for (const CellIndex l : labels.labels) dense = dense && l < n;
  if (dense) {
    std::vector<CellIndex> first(n, kUnset);
    for (CellIndex i = 0; i < n; ++i) {
      CellIndex& f = first[labels[i]];
      const bool fresh = f == kUnset;
      if (fresh) f = i;
      assign(i, f, fresh);
    }
    return;
  }
  std::unordered_map<CellIndex, CellIndex> first;
  for (CellIndex i = 0; i < n; ++i) {
    const auto [it, fresh] = first.try_emplace(labels[i], i);
    assign(i, it->second, fresh);
  }
}

void check_same_dims(const LabelMap& a, const LabelMap& b) {
  if (a.width != b.width || a.height != b.height || a.size() != b.size()) {
    throw Error("label maps differ in size: " + std::to_string(a.width) + "x" +
                std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                std::to_string(b.height));
  }
}

}  // namespace

Partition canonicalize(const LabelMap& labels) {
  Partition p{labels.width, labels.height, std::vector<CellIndex>(labels.size()), 0};
  for_each_class(labels, [&](CellIndex i, CellIndex first, bool fresh) {
    p.canonical[i] = first;
    p.components += fresh;
  });
  return p;
}

std::optional<CellIndex> first_difference(const LabelMap& a, const LabelMap& b) {
  check_same_dims(a, b);
  const Partition ca = canonicalize(a);
  const Partition cb = canonicalize(b);
  const std::size_t at = simd::first_mismatch(ca.canonical, cb.canonical);
  if (at == ca.canonical.size()) return std::nullopt;
  return static_cast<CellIndex>(at);
}

bool equivalent(const LabelMap& a, const LabelMap& b) { return !first_difference(a, b); }

std::vector<std::uint32_t> renumber(const LabelMap& labels, std::size_t* components) {
  std::vector<std::uint32_t> ids(labels.size());
  std::uint32_t next = 0;
  std::vector<std::uint32_t> id_of_first(labels.size());
  for_each_class(labels, [&](CellIndex i, CellIndex first, bool fresh) {
    if (fresh) id_of_first[i] = next++;
    ids[i] = id_of_first[first];
  });
  if (components != nullptr) *components = next;
  return ids;
}

}  // namespace ccl
