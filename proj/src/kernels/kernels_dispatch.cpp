// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <string_view>

#include "relmachine/kernels.hpp"

namespace relmachine {

#if RELMACHINE_HAVE_AVX2
namespace detail {
const KernelTable& avx2_table() noexcept;
}
#endif

const KernelTable* avx2_kernels() noexcept {
#if RELMACHINE_HAVE_AVX2
  static const bool usable = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  if (usable) return &detail::avx2_table();
#endif
  return nullptr;
}

const KernelTable& select_kernels(std::string_view request) noexcept {
  if (request != "auto" && request != "avx2") return scalar_kernels();
  if (const KernelTable* simd = avx2_kernels()) return *simd;
  return scalar_kernels();
}

const KernelTable& active_kernels() noexcept {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("RELMACHINE_KERNELS");
    return select_kernels(env ? std::string_view(env) : std::string_view("auto"));
  }();
  return chosen;
}

}  // namespace relmachine
