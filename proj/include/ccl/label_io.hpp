// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ccl/label_map.hpp"

namespace ccl {

/// raw-u32le: one little-endian uint32 per cell, row-major, no header. Both
///            sides must be <= 65535.
/// csv:       one line per image row, labels separated by ','.
/// pgm-recolor: components renumbered in order of first appearance and spread
///            over grey levels 1..254 (display only; not decodable).
enum class LabelFormat { raw_u32le, csv, pgm_recolor };

LabelFormat parse_label_format(std::string_view name);
std::string_view to_string(LabelFormat f) noexcept;

inline constexpr std::uint32_t kMaxRawSide = 65535;

std::vector<std::uint8_t> encode_labels(const LabelMap& labels, LabelFormat format);

LabelMap decode_raw_u32le(std::span<const std::uint8_t> bytes, std::uint32_t width,
                          std::uint32_t height);
LabelMap decode_csv(std::string_view text);

}  // namespace ccl
