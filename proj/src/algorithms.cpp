// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "ccl/algorithms.hpp"

#include <string>

#include "ccl/baselines.hpp"
#include "ccl/optimized.hpp"

namespace ccl {

std::string_view to_string(AlgoId id) noexcept {
  switch (id) {
    case AlgoId::label_equivalence: return "label_equivalence";
    case AlgoId::conventional_uf: return "conventional_uf";
    case AlgoId::line_uf: return "line_uf";
    case AlgoId::optimized_uf: return "optimized_uf";
    case AlgoId::oracle: return "oracle";
  }
  return "?";
}

AlgoId parse_algo(std::string_view name) {
  for (const AlgoId id : kAllAlgos) {
    if (name == to_string(id)) return id;
  }
  if (name == "le" || name == "label_le") return AlgoId::label_equivalence;
  if (name == "uf") return AlgoId::conventional_uf;
  if (name == "line") return AlgoId::line_uf;
  if (name == "ours" || name == "optimized") return AlgoId::optimized_uf;
  if (name == "flood_fill") return AlgoId::oracle;
  throw Error("unknown algorithm '" + std::string(name) + "'");
}

std::string_view display_name(AlgoId id) noexcept {
  switch (id) {
    case AlgoId::label_equivalence: return "LE";
    case AlgoId::conventional_uf: return "UF";
    case AlgoId::line_uf: return "Line UF";
    case AlgoId::optimized_uf: return "ours";
    case AlgoId::oracle: return "oracle";
  }
  return "?";
}

engine::BlockConfig default_block(AlgoId id) noexcept {
  return id == AlgoId::line_uf ? engine::kDefaultLineBlock : engine::kDefaultBlock;
}

LabelMap run_algorithm(AlgoId id, const Image& img, engine::BlockConfig cfg,
                       const engine::ExecOptions& opts, Instrumentation* instr) {
  switch (id) {
    case AlgoId::label_equivalence: return baselines::label_le(img, cfg, opts, instr);
    case AlgoId::conventional_uf: return baselines::label_conventional_uf(img, cfg, opts, instr);
    case AlgoId::line_uf: return baselines::label_line_uf(img, cfg, opts, instr);
    case AlgoId::optimized_uf: return optimized::label_optimized(img, cfg, opts, instr);
    case AlgoId::oracle: return baselines::flood_fill_oracle(img);
  }
  throw Error("unknown algorithm");
}

}  // namespace ccl
