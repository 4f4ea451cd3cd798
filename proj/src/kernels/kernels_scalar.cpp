// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include "relmachine/kernels.hpp"

#include <complex>

namespace relmachine {
namespace {

void matvec(const Complex* a, const Complex* x, Complex* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const Complex* row = a + i * n;
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

void horner_step(const Complex* a, const Complex* base, const Complex* v, Complex* out,
                 std::size_t n, Complex s) {
  for (std::size_t i = 0; i < n; ++i) {
    const Complex* row = a + i * n;
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * v[j];
    out[i] = base[i] + s * acc;
  }
}

double norm_sq(const Complex* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::norm(x[i]);
  return acc;
}

double diff_norm_sq(const Complex* x, const Complex* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::norm(x[i] - y[i]);
  return acc;
}

constexpr KernelTable kScalar{"scalar", matvec, horner_step, norm_sq, diff_norm_sq};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace relmachine
