// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

// NEON kernels for AArch64, where Advanced SIMD is architecturally
// guaranteed. Two float64x2 accumulators hold lanes {0,1} and {2,3} so the
// reduction order matches the scalar reference.

#include "sdg/simd/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace sdg::simd {

#if defined(__aarch64__)

namespace {

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    acc23 = vaddq_f64(acc23, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
  }
  double s = (vgetq_lane_f64(acc01, 0) + vgetq_lane_f64(acc01, 1)) +
             (vgetq_lane_f64(acc23, 0) + vgetq_lane_f64(acc23, 1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

inline void axpy_neon_inline(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  axpy_neon_inline(a, x, y, n);
}

void gemm_nn_neon(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      if (aip == 0.0) continue;
      axpy_neon_inline(aip, b + p * n, c + i * n, n);
    }
  }
}

void gemm_tn_neon(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      if (aip == 0.0) continue;
      axpy_neon_inline(aip, b + i * n, c + p * n, n);
    }
  }
}

void gemm_nt_neon(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c[i * n + j] += dot_neon(a + i * k, b + j * k, k);
    }
  }
}

constexpr KernelTable kNeon = {Isa::kNeon,  dot_neon,     axpy_neon,
                               gemm_nn_neon, gemm_tn_neon, gemm_nt_neon};

}  // namespace

const KernelTable* neon_kernels() { return &kNeon; }

#else

const KernelTable* neon_kernels() { return nullptr; }

#endif

}  // namespace sdg::simd
