// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

// Double-precision inner loops behind the dense and sparse matrix code.
//
// Every backend uses the same association order: elementwise kernels are
// trivially order-free, and reductions keep four interleaved partial sums
// combined as (s0 + s1) + (s2 + s3) before a sequential tail. Backends are
// therefore bit-identical, which the equivalence tests assert. The build
// disables FP contraction so the scalar reference never fuses multiply-add.
namespace sdg::simd {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);
std::optional<Isa> parse_isa(std::string_view name);

// Row-major kernels. All `gemm_*` accumulate into `c`.
struct KernelTable {
  Isa isa;
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // c(m x n) += a(m x k) * b(k x n)
  void (*gemm_nn)(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t k, std::size_t n);
  // c(k x n) += a(m x k)^T * b(m x n)
  void (*gemm_tn)(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t k, std::size_t n);
  // c(m x n) += a(m x k) * b(n x k)^T
  void (*gemm_nt)(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t k, std::size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when the backend was not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

bool isa_available(Isa isa);

// Best available backend, unless SDG_SIMD=scalar|avx2|neon|auto overrides.
const KernelTable& active();

// Forces a backend for the rest of the process (tests, benchmarks).
// Throws sdg::Error(kInvalidArgument) if unavailable.
void select(Isa isa);

// Convenience wrappers over active().
inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}

}  // namespace sdg::simd
