// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

// Built with -mavx2; only reached through the dispatcher after a CPUID check.

#include <immintrin.h>

#include <algorithm>

#include "ccl/simd.hpp"

namespace ccl::simd {
namespace {

void threshold_u8(const std::uint8_t* src, std::uint8_t* dst, std::size_t n, std::uint8_t t) {
  std::size_t i = 0;
  const __m256i thr = _mm256_set1_epi8(static_cast<char>(t));
  for (; i + 32 <= n; i += 32) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    // v >= t  <=>  max(v, t) == v
    const __m256i ge = _mm256_cmpeq_epi8(_mm256_max_epu8(v, thr), v);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), ge);
  }
  for (; i < n; ++i) dst[i] = src[i] >= t ? 255 : 0;
}

inline __m256i load_pix8(const std::uint8_t* p) {
  return _mm256_cvtepu8_epi32(_mm_loadl_epi64(reinterpret_cast<const __m128i*>(p)));
}

inline __m256i load_lab8(const std::uint32_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

// min(m, eq ? cand : m)
inline __m256i masked_min(__m256i m, __m256i eq, __m256i cand) {
  return _mm256_min_epu32(m, _mm256_blendv_epi8(m, cand, eq));
}

void scalar_cell(const NeighborMinRow& r, std::size_t x) {
  const std::size_t w = r.width;
  const std::uint8_t p = r.pix[x];
  std::uint32_t m = r.lab[x];
  if (x > 0 && r.pix[x - 1] == p) m = std::min(m, r.lab[x - 1]);
  if (x + 1 < w && r.pix[x + 1] == p) m = std::min(m, r.lab[x + 1]);
  if (r.pix_up != nullptr && r.pix_up[x] == p) m = std::min(m, r.lab_up[x]);
  if (r.pix_down != nullptr && r.pix_down[x] == p) m = std::min(m, r.lab_down[x]);
  r.out[x] = m;
}

void neighbor_min_row(const NeighborMinRow& r) {
  const std::size_t w = r.width;
  if (w < 10) {
    for (std::size_t x = 0; x < w; ++x) scalar_cell(r, x);
    return;
  }
  scalar_cell(r, 0);
  std::size_t x = 1;
  // Vector body needs x - 1 >= 0 and x + 8 <= w - 1 for the right-neighbour load.
  for (; x + 9 <= w; x += 8) {
    const __m256i p = load_pix8(r.pix + x);
    __m256i m = load_lab8(r.lab + x);
    m = masked_min(m, _mm256_cmpeq_epi32(p, load_pix8(r.pix + x - 1)), load_lab8(r.lab + x - 1));
    m = masked_min(m, _mm256_cmpeq_epi32(p, load_pix8(r.pix + x + 1)), load_lab8(r.lab + x + 1));
    if (r.pix_up != nullptr) {
      m = masked_min(m, _mm256_cmpeq_epi32(p, load_pix8(r.pix_up + x)), load_lab8(r.lab_up + x));
    }
    if (r.pix_down != nullptr) {
      m = masked_min(m, _mm256_cmpeq_epi32(p, load_pix8(r.pix_down + x)),
                     load_lab8(r.lab_down + x));
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(r.out + x), m);
  }
  for (; x < w; ++x) scalar_cell(r, x);
}

void gather_u32(const std::uint32_t* table, const std::uint32_t* index, std::uint32_t* out,
                std::size_t n) {
  std::size_t i = 0;
  const int* base = reinterpret_cast<const int*>(table);
  for (; i + 8 <= n; i += 8) {
    const __m256i idx = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(index + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), _mm256_i32gather_epi32(base, idx, 4));
  }
  for (; i < n; ++i) out[i] = table[index[i]];
}

std::size_t first_mismatch_u32(const std::uint32_t* a, const std::uint32_t* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    const unsigned eq = static_cast<unsigned>(_mm256_movemask_epi8(_mm256_cmpeq_epi32(va, vb)));
    if (eq != 0xFFFFFFFFu) return i + static_cast<std::size_t>(__builtin_ctz(~eq)) / 4;
  }
  for (; i < n; ++i) {
    if (a[i] != b[i]) return i;
  }
  return n;
}

}  // namespace

namespace detail {
const Kernels kAvx2Kernels{&threshold_u8, &neighbor_min_row, &gather_u32, &first_mismatch_u32};
}  // namespace detail

}  // namespace ccl::simd
