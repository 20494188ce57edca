// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string_view>

#include "ccl/engine.hpp"
#include "ccl/grid.hpp"
#include "ccl/label_map.hpp"

namespace ccl {

enum class AlgoId { label_equivalence, conventional_uf, line_uf, optimized_uf, oracle };

inline constexpr std::array kAllAlgos{AlgoId::label_equivalence, AlgoId::conventional_uf,
                                      AlgoId::line_uf, AlgoId::optimized_uf, AlgoId::oracle};
/// The four parallel labelers, in report column order.
inline constexpr std::array kParallelAlgos{AlgoId::label_equivalence, AlgoId::conventional_uf,
                                           AlgoId::line_uf, AlgoId::optimized_uf};

/// Canonical id, e.g. "optimized_uf". Aliases accepted by parse_algo:
/// le, label_le, uf, line, ours, optimized, flood_fill.
std::string_view to_string(AlgoId id) noexcept;
AlgoId parse_algo(std::string_view name);
/// Short column heading used in reports ("LE", "UF", "Line UF", "ours", "oracle").
std::string_view display_name(AlgoId id) noexcept;

/// 512x1 for the line labeler, 32x16 otherwise.
engine::BlockConfig default_block(AlgoId id) noexcept;

/// Runs one labeler. The oracle ignores cfg and opts.
LabelMap run_algorithm(AlgoId id, const Image& img, engine::BlockConfig cfg,
                       const engine::ExecOptions& opts = {}, Instrumentation* instr = nullptr);

}  // namespace ccl
