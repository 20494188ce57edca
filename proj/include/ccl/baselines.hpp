// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Reference labelers the optimized pipeline is compared against.
//
// These are reconstructions from one-line characterisations, not ports of the
// original implementations:
//  - label equivalence: multi-pass scan / analysis / relabel with a reference
//    array, repeated until a scan changes nothing.
//  - conventional UF: block-wise union-find local merge without the coarse
//    scans, then a global merge that launches one thread per image cell.
//  - line UF: union-find over 1-row segments, then a global merge over every
//    cell (upper neighbour, and left neighbour across segment ends).

#include "ccl/engine.hpp"
#include "ccl/grid.hpp"
#include "ccl/label_map.hpp"

namespace ccl::baselines {

/// Sequential BFS flood fill; the ground truth for every other labeler.
/// Each component is labelled with its smallest linear index.
LabelMap flood_fill_oracle(const Image& img);

LabelMap label_le(const Image& img, engine::BlockConfig cfg = engine::kDefaultBlock,
                  const engine::ExecOptions& opts = {}, Instrumentation* instr = nullptr);

LabelMap label_conventional_uf(const Image& img, engine::BlockConfig cfg = engine::kDefaultBlock,
                               const engine::ExecOptions& opts = {},
                               Instrumentation* instr = nullptr);

/// Requires cfg.by == 1.
LabelMap label_line_uf(const Image& img, engine::BlockConfig cfg = engine::kDefaultLineBlock,
                       const engine::ExecOptions& opts = {}, Instrumentation* instr = nullptr);

/// Global merge of the line labeler alone (one work item per cell); exposed
/// for tests that inspect the state after the local phase.
std::uint64_t line_global_merge(const Image& img, engine::BlockConfig cfg, LabelMap& labels,
                                const engine::ExecOptions& opts, Instrumentation* instr);

/// Local phase of the line labeler alone.
void line_local_merge(const Image& img, engine::BlockConfig cfg, LabelMap& labels,
                      const engine::ExecOptions& opts);

}  // namespace ccl::baselines
