// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ccl/label_map.hpp"

namespace ccl {

/// Canonical form of a labelling: each cell mapped to the smallest index of
/// the cells sharing its label value. Label values are treated as opaque class
/// tags, so an unflattened parent array must be flattened first.
struct Partition {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<CellIndex> canonical;
  std::size_t components = 0;

  friend bool operator==(const Partition&, const Partition&) = default;
};

Partition canonicalize(const LabelMap& labels);

/// True iff both labellings induce the same partition. Throws on size mismatch.
bool equivalent(const LabelMap& a, const LabelMap& b);

/// First cell whose canonical labels differ, if any. Throws on size mismatch.
std::optional<CellIndex> first_difference(const LabelMap& a, const LabelMap& b);

/// Component ids 0..K-1 in order of first appearance, for display.
std::vector<std::uint32_t> renumber(const LabelMap& labels, std::size_t* components = nullptr);

}  // namespace ccl
