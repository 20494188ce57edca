// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "ccl/grid.hpp"

#include <charconv>
#include <fstream>
#include <algorithm>
#include <iterator>
#include <limits>

#include "ccl/simd.hpp"

namespace ccl {
namespace {

// Labels are 32-bit linear indices and the AVX2 gather takes signed offsets.
constexpr std::uint64_t kMaxCells = std::numeric_limits<std::int32_t>::max();

void check_dims(std::uint64_t width, std::uint64_t height) {
  if (width == 0 || height == 0) {
    throw Error("image dimensions must be positive, got " + std::to_string(width) + "x" +
                std::to_string(height));
  }
  if (width * height > kMaxCells) {
    throw Error("image too large: " + std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

Image::Image(std::uint32_t width, std::uint32_t height, std::vector<Pixel> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width, height);
  if (pixels_.size() != static_cast<std::size_t>(width) * height) {
    throw Error("pixel buffer holds " + std::to_string(pixels_.size()) + " values, expected " +
                std::to_string(static_cast<std::size_t>(width) * height));
  }
}

Image::Image(std::uint32_t width, std::uint32_t height, Pixel fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

Pattern parse_pattern(std::string_view name) {
  if (name == "noise") return Pattern::noise;
  if (name == "stripes") return Pattern::stripes;
  if (name == "checkerboard") return Pattern::checkerboard;
  if (name == "uniform") return Pattern::uniform;
  if (name == "spiral") return Pattern::spiral;
  throw Error("unknown pattern '" + std::string(name) + "'");
}

std::string_view to_string(Pattern p) noexcept {
  switch (p) {
    case Pattern::noise: return "noise";
    case Pattern::stripes: return "stripes";
    case Pattern::checkerboard: return "checkerboard";
    case Pattern::uniform: return "uniform";
    case Pattern::spiral: return "spiral";
  }
  return "?";
}

namespace {

std::vector<Pixel> spiral_pixels(std::uint32_t width, std::uint32_t height) {
  std::vector<Pixel> px(static_cast<std::size_t>(width) * height, 0);
  const auto w = static_cast<std::int64_t>(width);
  const auto h = static_cast<std::int64_t>(height);
  auto inside = [&](std::int64_t x, std::int64_t y) { return x >= 0 && y >= 0 && x < w && y < h; };
  auto marked = [&](std::int64_t x, std::int64_t y) {
    return px[static_cast<std::size_t>(y * w + x)] != 0;
  };
  constexpr std::int64_t dx[4] = {1, 0, -1, 0};
  constexpr std::int64_t dy[4] = {0, 1, 0, -1};

  std::int64_t x = 0;
  std::int64_t y = 0;
  int dir = 0;
  px[0] = 255;
  // Step forward while the next cell is free and the one beyond it is not part
  // of an earlier arm; turn clockwise otherwise. Two failed turns end the walk.
  int failed = 0;
  while (failed < 2) {
    const std::int64_t nx = x + dx[dir];
    const std::int64_t ny = y + dy[dir];
    const std::int64_t fx = nx + dx[dir];
    const std::int64_t fy = ny + dy[dir];
    if (inside(nx, ny) && !marked(nx, ny) && !(inside(fx, fy) && marked(fx, fy))) {
      x = nx;
      y = ny;
      px[static_cast<std::size_t>(y * w + x)] = 255;
      failed = 0;
    } else {
      dir = (dir + 1) % 4;
      ++failed;
    }
  }
  return px;
}

}  // namespace

Image generate(Pattern pattern, std::uint32_t width, std::uint32_t height,
               const PatternParams& params, std::uint64_t seed) {
  check_dims(width, height);
  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::vector<Pixel> px(n);
  switch (pattern) {
    case Pattern::noise: {
      if (!(params.density >= 0.0 && params.density <= 1.0)) {
        throw Error("noise density must lie in [0, 1], got " + std::to_string(params.density));
      }
      SplitMix64 rng(seed);
      for (auto& p : px) p = rng.next_unit() < params.density ? 255 : 0;
      break;
    }
    case Pattern::stripes: {
      if (params.stripe_period == 0) throw Error("stripe period must be positive");
      for (std::uint32_t y = 0; y < height; ++y) {
        for (std::uint32_t x = 0; x < width; ++x) {
          px[static_cast<std::size_t>(y) * width + x] = (x / params.stripe_period) % 2 ? 255 : 0;
        }
      }
      break;
    }
    case Pattern::checkerboard:
      for (std::uint32_t y = 0; y < height; ++y) {
        for (std::uint32_t x = 0; x < width; ++x) {
          px[static_cast<std::size_t>(y) * width + x] = (x + y) % 2 ? 255 : 0;
        }
      }
      break;
    case Pattern::uniform:
      std::fill(px.begin(), px.end(), params.fill_value);
      break;
    case Pattern::spiral:
      px = spiral_pixels(width, height);
      break;
  }
  return Image(width, height, std::move(px));
}

Image binarize(const Image& img, Pixel threshold) {
  std::vector<Pixel> out(img.size());
  simd::threshold(img.pixels(), out, threshold);
  return Image(img.width(), img.height(), std::move(out));
}

Image resize_nearest(const Image& img, std::uint32_t width, std::uint32_t height) {
  check_dims(width, height);
  std::vector<Pixel> out(static_cast<std::size_t>(width) * height);
  for (std::uint32_t y = 0; y < height; ++y) {
    const auto sy = static_cast<std::uint32_t>(static_cast<std::uint64_t>(y) * img.height() / height);
    for (std::uint32_t x = 0; x < width; ++x) {
      const auto sx = static_cast<std::uint32_t>(static_cast<std::uint64_t>(x) * img.width() / width);
      out[static_cast<std::size_t>(y) * width + x] = img.at(sx, sy);
    }
  }
  return Image(width, height, std::move(out));
}

namespace {

class PgmHeaderReader {
 public:
  explicit PgmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Skips whitespace and '#' comments, then parses a decimal field.
  std::uint64_t number(const char* what) {
    skip_space_and_comments();
    const auto* first = reinterpret_cast<const char*>(bytes_.data()) + pos_;
    const auto* last = reinterpret_cast<const char*>(bytes_.data()) + bytes_.size();
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) {
      throw Error(std::string("malformed PGM header: bad ") + what);
    }
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void single_space() {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
      throw Error("malformed PGM header: missing separator before raster");
    }
    ++pos_;
  }

  std::size_t pos() const noexcept { return pos_; }

 private:
  static bool is_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

Image read_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw Error("not a binary PGM file (expected magic \"P5\")");
  }
  PgmHeaderReader header(bytes);
  const std::uint64_t width = header.number("width");
  const std::uint64_t height = header.number("height");
  const std::uint64_t maxval = header.number("maxval");
  if (maxval == 0 || maxval > 255) {
    throw Error("unsupported PGM maxval " + std::to_string(maxval) + " (must be 1..255)");
  }
  header.single_space();
  check_dims(width, height);
  const std::size_t n = width * height;
  if (bytes.size() - header.pos() < n) {
    throw Error("truncated PGM raster: expected " + std::to_string(n) + " bytes, found " +
                std::to_string(bytes.size() - header.pos()));
  }
  const auto* raster = bytes.data() + header.pos();
  return Image(static_cast<std::uint32_t>(width), static_cast<std::uint32_t>(height),
               std::vector<Pixel>(raster, raster + n));
}

std::vector<std::uint8_t> write_pgm(const Image& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

Image load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  try {
    return read_pgm(bytes);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

void save_pgm(const Image& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  const auto bytes = write_pgm(img);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace ccl
