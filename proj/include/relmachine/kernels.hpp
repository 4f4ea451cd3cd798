// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace relmachine {

using Complex = std::complex<double>;

/// Dense complex kernels behind evolve(). Matrices are row-major n x n.
struct KernelTable {
  const char* name;
  /// y = A x
  void (*matvec)(const Complex* a, const Complex* x, Complex* y, std::size_t n);
  /// out = base + s * (A v); out must not alias v
  void (*horner_step)(const Complex* a, const Complex* base, const Complex* v, Complex* out,
                      std::size_t n, Complex s);
  double (*norm_sq)(const Complex* x, std::size_t n);
  double (*diff_norm_sq)(const Complex* x, const Complex* y, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels() noexcept;

/// "scalar", "avx2" or "auto"; anything else, or avx2 on a host without it,
/// gives scalar.
const KernelTable& select_kernels(std::string_view request) noexcept;
/// Chosen once from RELMACHINE_KERNELS (default auto).
const KernelTable& active_kernels() noexcept;

}  // namespace relmachine
