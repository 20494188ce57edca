// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Data-parallel inner loops used by the labelers and the verification code.
// Every kernel has a scalar reference implementation; vector variants are
// selected at runtime from what the CPU reports and must produce results that
// are bit-identical to the scalar path (tests/simd_test.cpp).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace ccl::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;
std::optional<Isa> parse_isa(std::string_view name) noexcept;

/// True when the variant was compiled in and the running CPU supports it.
bool supported(Isa isa) noexcept;

/// Widest supported variant.
Isa best() noexcept;

/// Variant used by the un-suffixed wrappers below. Defaults to best();
/// set_active() throws ccl::Error for an unsupported Isa.
Isa active() noexcept;
void set_active(Isa isa);

/// One row of the label-equivalence scan: for every x,
///   out[x] = min(labels[x], labels of the 4-neighbours whose pixel equals pix[x]).
/// `pix_up`/`lab_up` (and the `down` pair) are null on the first (last) row.
struct NeighborMinRow {
  const std::uint8_t* pix = nullptr;
  const std::uint8_t* pix_up = nullptr;
  const std::uint8_t* pix_down = nullptr;
  const std::uint32_t* lab = nullptr;
  const std::uint32_t* lab_up = nullptr;
  const std::uint32_t* lab_down = nullptr;
  std::uint32_t* out = nullptr;
  std::size_t width = 0;
};

struct Kernels {
  void (*threshold_u8)(const std::uint8_t* src, std::uint8_t* dst, std::size_t n,
                       std::uint8_t threshold);
  void (*neighbor_min_row)(const NeighborMinRow& row);
  /// out[i] = table[index[i]]; every index must be < 2^31.
  void (*gather_u32)(const std::uint32_t* table, const std::uint32_t* index,
                     std::uint32_t* out, std::size_t n);
  /// First i with a[i] != b[i], or n.
  std::size_t (*first_mismatch_u32)(const std::uint32_t* a, const std::uint32_t* b,
                                    std::size_t n);
};

const Kernels& kernels(Isa isa);
inline const Kernels& kernels() { return kernels(active()); }

namespace detail {
extern const Kernels kScalarKernels;
#if defined(CCL_HAVE_AVX2)
extern const Kernels kAvx2Kernels;
#endif
}  // namespace detail

inline void threshold(std::span<const std::uint8_t> src, std::span<std::uint8_t> dst,
                      std::uint8_t t) {
  kernels().threshold_u8(src.data(), dst.data(), src.size(), t);
}

inline std::size_t first_mismatch(std::span<const std::uint32_t> a,
                                  std::span<const std::uint32_t> b) {
  const std::size_t n = a.size() < b.size() ? a.size() : b.size();
  return kernels().first_mismatch_u32(a.data(), b.data(), n);
}

}  // namespace ccl::simd
