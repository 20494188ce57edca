// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "ccl/simd.hpp"

#include <algorithm>

namespace ccl::simd {
namespace {

void threshold_u8(const std::uint8_t* src, std::uint8_t* dst, std::size_t n, std::uint8_t t) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = src[i] >= t ? 255 : 0;
}

void neighbor_min_row(const NeighborMinRow& r) {
  const std::size_t w = r.width;
  for (std::size_t x = 0; x < w; ++x) {
    const std::uint8_t p = r.pix[x];
    std::uint32_t m = r.lab[x];
    if (x > 0 && r.pix[x - 1] == p) m = std::min(m, r.lab[x - 1]);
    if (x + 1 < w && r.pix[x + 1] == p) m = std::min(m, r.lab[x + 1]);
    if (r.pix_up != nullptr && r.pix_up[x] == p) m = std::min(m, r.lab_up[x]);
    if (r.pix_down != nullptr && r.pix_down[x] == p) m = std::min(m, r.lab_down[x]);
    r.out[x] = m;
  }
}

void gather_u32(const std::uint32_t* table, const std::uint32_t* index, std::uint32_t* out,
                std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = table[index[i]];
}

std::size_t first_mismatch_u32(const std::uint32_t* a, const std::uint32_t* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) return i;
  }
  return n;
}

}  // namespace

namespace detail {
const Kernels kScalarKernels{&threshold_u8, &neighbor_min_row, &gather_u32, &first_mismatch_u32};
}  // namespace detail

}  // namespace ccl::simd
