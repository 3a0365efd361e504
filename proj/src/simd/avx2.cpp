// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

// AVX2 kernels, compiled per function with target attributes so the rest of
// the library stays baseline x86-64. Multiply and add are kept separate (no
// FMA) to match the scalar reference exactly.

#include "sdg/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define SDG_HAVE_AVX2_BACKEND 1
#endif

namespace sdg::simd {

#if defined(SDG_HAVE_AVX2_BACKEND)

namespace {

#define SDG_AVX2 __attribute__((target("avx2")))

SDG_AVX2 double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i),
                                           _mm256_loadu_pd(y + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

SDG_AVX2 inline void axpy_avx2_inline(double a, const double* x, double* y,
                                      std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d y0 = _mm256_loadu_pd(y + i);
    __m256d y1 = _mm256_loadu_pd(y + i + 4);
    y0 = _mm256_add_pd(y0, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    y1 = _mm256_add_pd(y1, _mm256_mul_pd(va, _mm256_loadu_pd(x + i + 4)));
    _mm256_storeu_pd(y + i, y0);
    _mm256_storeu_pd(y + i + 4, y1);
  }
  for (; i + 4 <= n; i += 4) {
    __m256d y0 = _mm256_loadu_pd(y + i);
    y0 = _mm256_add_pd(y0, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, y0);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

SDG_AVX2 void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  axpy_avx2_inline(a, x, y, n);
}

SDG_AVX2 void gemm_nn_avx2(const double* a, const double* b, double* c,
                           std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      if (aip == 0.0) continue;
      axpy_avx2_inline(aip, b + p * n, c + i * n, n);
    }
  }
}

SDG_AVX2 void gemm_tn_avx2(const double* a, const double* b, double* c,
                           std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      if (aip == 0.0) continue;
      axpy_avx2_inline(aip, b + i * n, c + p * n, n);
    }
  }
}

SDG_AVX2 void gemm_nt_avx2(const double* a, const double* b, double* c,
                           std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c[i * n + j] += dot_avx2(a + i * k, b + j * k, k);
    }
  }
}

#undef SDG_AVX2

constexpr KernelTable kAvx2 = {Isa::kAvx2,  dot_avx2,     axpy_avx2,
                               gemm_nn_avx2, gemm_tn_avx2, gemm_nt_avx2};

}  // namespace

const KernelTable* avx2_kernels() {
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &kAvx2 : nullptr;
}

#else

const KernelTable* avx2_kernels() { return nullptr; }

#endif

}  // namespace sdg::simd
