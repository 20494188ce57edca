// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ccl {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Pixel = std::uint8_t;

/// Linear cell index (x + y * width). Also the label type: labels are always
/// linear indices of representative cells.
using CellIndex = std::uint32_t;

struct Coord {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  friend bool operator==(const Coord&, const Coord&) = default;
};

/// Immutable row-major 8-bit image.
class Image {
 public:
  Image(std::uint32_t width, std::uint32_t height, std::vector<Pixel> pixels);
  /// Image of the given size with every cell set to `fill`.
  Image(std::uint32_t width, std::uint32_t height, Pixel fill = 0);

  std::uint32_t width() const noexcept { return width_; }
  std::uint32_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  std::span<const Pixel> pixels() const noexcept { return pixels_; }
  Pixel operator[](CellIndex i) const noexcept { return pixels_[i]; }
  Pixel at(std::uint32_t x, std::uint32_t y) const noexcept {
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
  }

  CellIndex index(Coord c) const noexcept { return c.x + c.y * width_; }
  Coord coord(CellIndex i) const noexcept { return {i % width_, i / width_}; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::uint32_t width_;
  std::uint32_t height_;
  std::vector<Pixel> pixels_;
};

/// SplitMix64 (Steele, Lea, Flood 2014). Used for every synthetic fixture so
/// that images are reproducible across implementations and platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) built from the top 53 bits.
  double next_unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound); bound must be positive. Rejection keeps it unbiased.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next();
      if (r >= limit) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
};

enum class Pattern { noise, stripes, checkerboard, uniform, spiral };

struct PatternParams {
  double density = 0.5;          // noise: probability of a 255 cell
  std::uint32_t stripe_period = 1;  // stripes: width of each vertical band
  Pixel fill_value = 0;          // uniform
};

Pattern parse_pattern(std::string_view name);
std::string_view to_string(Pattern p) noexcept;

/// Deterministic synthetic image.
///
///  - noise: each cell independently 255 with probability `density`, else 0,
///    drawn row-major from SplitMix64(seed).
///  - stripes: vertical bands of width `stripe_period`, alternating 0 / 255
///    starting with 0 at x = 0.
///  - checkerboard: 255 where (x + y) is odd, else 0.
///  - uniform: every cell `fill_value`.
///  - spiral: a single-cell-wide clockwise spiral of 255 starting at (0, 0)
///    on a 0 background, arms separated by a one-cell gap.
Image generate(Pattern pattern, std::uint32_t width, std::uint32_t height,
               const PatternParams& params = {}, std::uint64_t seed = 0);

constexpr Pixel kDefaultThreshold = 128;

/// out = 255 where in >= threshold, else 0.
Image binarize(const Image& img, Pixel threshold = kDefaultThreshold);

/// Nearest-neighbour resample; preserves region topology when upscaling by an
/// integer factor.
Image resize_nearest(const Image& img, std::uint32_t width, std::uint32_t height);

/// Binary PGM (P5). Comments in the header are accepted on read; writes use the
/// canonical form "P5\n<w> <h>\n255\n" followed by the payload.
Image read_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_pgm(const Image& img);

Image load_pgm(const std::string& path);
void save_pgm(const Image& img, const std::string& path);

}  // namespace ccl
