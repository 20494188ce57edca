// Copyright 2026 The ccl-toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <string>

#include "ccl/grid.hpp"
#include "ccl/simd.hpp"

namespace ccl::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(CCL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{best()};
  return slot;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "?";
}

std::optional<Isa> parse_isa(std::string_view name) noexcept {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  return std::nullopt;
}

bool supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return cpu_has_avx2();
  }
  return false;
}

Isa best() noexcept { return supported(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

Isa active() noexcept { return active_slot().load(std::memory_order_relaxed); }

void set_active(Isa isa) {
  if (!supported(isa)) {
    throw Error("simd variant '" + std::string(to_string(isa)) + "' is not supported on this CPU");
  }
  active_slot().store(isa, std::memory_order_relaxed);
}

const Kernels& kernels(Isa isa) {
#if defined(CCL_HAVE_AVX2)
  if (isa == Isa::avx2 && cpu_has_avx2()) return detail::kAvx2Kernels;
#endif
  if (isa != Isa::scalar) {
    throw Error("simd variant '" + std::string(to_string(isa)) + "' is not supported on this CPU");
  }
  return detail::kScalarKernels;
}

}  // namespace ccl::simd
