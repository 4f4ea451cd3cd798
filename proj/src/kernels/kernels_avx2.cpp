// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include "relmachine/kernels.hpp"

namespace relmachine::detail {
namespace {

// Two interleaved complex products per lane pair: (a0*b0, a1*b1).
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

inline Complex row_dot(const Complex* row, const Complex* x, std::size_t n) {
  const double* r = reinterpret_cast<const double*>(row);
  const double* v = reinterpret_cast<const double*>(x);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    acc0 = _mm256_add_pd(acc0, cmul(_mm256_loadu_pd(r + 2 * j), _mm256_loadu_pd(v + 2 * j)));
    acc1 = _mm256_add_pd(acc1,
                         cmul(_mm256_loadu_pd(r + 2 * j + 4), _mm256_loadu_pd(v + 2 * j + 4)));
  }
  for (; j + 2 <= n; j += 2)
    acc0 = _mm256_add_pd(acc0, cmul(_mm256_loadu_pd(r + 2 * j), _mm256_loadu_pd(v + 2 * j)));
  acc0 = _mm256_add_pd(acc0, acc1);
  const __m128d sum = _mm_add_pd(_mm256_castpd256_pd128(acc0), _mm256_extractf128_pd(acc0, 1));
  alignas(16) double out[2];
  _mm_store_pd(out, sum);
  Complex result{out[0], out[1]};
  for (; j < n; ++j) result += row[j] * x[j];
  return result;
}

void matvec(const Complex* a, const Complex* x, Complex* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = row_dot(a + i * n, x, n);
}

void horner_step(const Complex* a, const Complex* base, const Complex* v, Complex* out,
                 std::size_t n, Complex s) {
  for (std::size_t i = 0; i < n; ++i) out[i] = base[i] + s * row_dot(a + i * n, v, n);
}

inline double hsum(__m256d v) {
  const __m128d s = _mm_add_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double norm_sq(const Complex* x, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(x);
  const std::size_t m = 2 * n;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d v = _mm256_loadu_pd(p + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double total = hsum(acc);
  for (; i < m; ++i) total += p[i] * p[i];
  return total;
}

double diff_norm_sq(const Complex* x, const Complex* y, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(x);
  const double* q = reinterpret_cast<const double*>(y);
  const std::size_t m = 2 * n;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(p + i), _mm256_loadu_pd(q + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double total = hsum(acc);
  for (; i < m; ++i) total += (p[i] - q[i]) * (p[i] - q[i]);
  return total;
}

constexpr KernelTable kAvx2{"avx2", matvec, horner_step, norm_sq, diff_norm_sq};

}  // namespace

const KernelTable& avx2_table() noexcept { return kAvx2; }

}  // namespace relmachine::detail
