// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "ccl/label_io.hpp"

#include <charconv>
#include <string>

#include "ccl/partition.hpp"

namespace ccl {
namespace {

void check_raw_dims(std::uint32_t width, std::uint32_t height) {
  if (width > kMaxRawSide || height > kMaxRawSide) {
    throw Error("raw-u32le output limited to " + std::to_string(kMaxRawSide) +
                " cells per side, got " + std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

LabelFormat parse_label_format(std::string_view name) {
  if (name == "raw-u32le") return LabelFormat::raw_u32le;
  if (name == "csv") return LabelFormat::csv;
  if (name == "pgm-recolor") return LabelFormat::pgm_recolor;
  throw Error("unknown label format '" + std::string(name) +
              "' (expected raw-u32le, csv or pgm-recolor)");
}

std::string_view to_string(LabelFormat f) noexcept {
  switch (f) {
    case LabelFormat::raw_u32le: return "raw-u32le";
    case LabelFormat::csv: return "csv";
    case LabelFormat::pgm_recolor: return "pgm-recolor";
  }
  return "?";
}

std::vector<std::uint8_t> encode_labels(const LabelMap& labels, LabelFormat format) {
  std::vector<std::uint8_t> out;
  switch (format) {
    case LabelFormat::raw_u32le:
      check_raw_dims(labels.width, labels.height);
      out.reserve(labels.size() * 4);
      for (const CellIndex l : labels.labels) {
        for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(l >> (8 * b)));
      }
      break;
    case LabelFormat::csv: {
      char buf[16];
      for (std::uint32_t y = 0; y < labels.height; ++y) {
        for (std::uint32_t x = 0; x < labels.width; ++x) {
          if (x > 0) out.push_back(',');
          const auto r = std::to_chars(buf, buf + sizeof buf,
                                       labels[static_cast<std::size_t>(y) * labels.width + x]);
          out.insert(out.end(), buf, r.ptr);
        }
        out.push_back('\n');
      }
      break;
    }
    case LabelFormat::pgm_recolor: {
      const auto ids = renumber(labels);
      std::vector<Pixel> px(ids.size());
      for (std::size_t i = 0; i < ids.size(); ++i) {
        px[i] = static_cast<Pixel>((static_cast<std::uint64_t>(ids[i]) * 73u) % 254u + 1u);
      }
      return write_pgm(Image(labels.width, labels.height, std::move(px)));
    }
  }
  return out;
}

LabelMap decode_raw_u32le(std::span<const std::uint8_t> bytes, std::uint32_t width,
                          std::uint32_t height) {
  check_raw_dims(width, height);
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (bytes.size() != n * 4) {
    throw Error("raw label stream holds " + std::to_string(bytes.size()) + " bytes, expected " +
                std::to_string(n * 4));
  }
  LabelMap out(width, height);
  for (std::size_t i = 0; i < n; ++i) {
    out.labels[i] = static_cast<CellIndex>(bytes[4 * i]) |
                    static_cast<CellIndex>(bytes[4 * i + 1]) << 8 |
                    static_cast<CellIndex>(bytes[4 * i + 2]) << 16 |
                    static_cast<CellIndex>(bytes[4 * i + 3]) << 24;
  }
  return out;
}

LabelMap decode_csv(std::string_view text) {
  std::vector<CellIndex> labels;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    if (line.empty()) continue;
    std::uint32_t cols = 0;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (;;) {
      CellIndex v = 0;
      const auto r = std::from_chars(p, end, v);
      if (r.ec != std::errc() || r.ptr == p) {
        throw Error("malformed label CSV at row " + std::to_string(height));
      }
      labels.push_back(v);
      ++cols;
      p = r.ptr;
      if (p == end) break;
      if (*p != ',') throw Error("malformed label CSV at row " + std::to_string(height));
      ++p;
    }
    if (height == 0) width = cols;
    if (cols != width) {
      throw Error("label CSV row " + std::to_string(height) + " has " + std::to_string(cols) +
                  " columns, expected " + std::to_string(width));
    }
    ++height;
  }
  if (height == 0) throw Error("empty label CSV");
  return LabelMap(width, height, std::move(labels));
}

}  // namespace ccl
