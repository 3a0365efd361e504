// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "sdg/error.hpp"
#include "sdg/matrix.hpp"
#include "sdg/rng.hpp"
#include "sdg/simd/kernels.hpp"

namespace {

using sdg::simd::KernelTable;

std::vector<double> random_vec(sdg::Rng& rng, std::size_t n, double sparsity = 0.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.bernoulli(sparsity) ? 0.0 : rng.uniform(-3.0, 3.0);
  return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<const KernelTable*> vector_backends() {
  std::vector<const KernelTable*> out;
  if (auto* t = sdg::simd::avx2_kernels()) out.push_back(t);
  if (auto* t = sdg::simd::neon_kernels()) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("scalar dot and gemm agree with a naive triple loop") {
  sdg::Rng rng(1);
  const auto& k = sdg::simd::scalar_kernels();
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 33u}) {
    auto x = random_vec(rng, n);
    auto y = random_vec(rng, n);
    double naive = 0.0;
    for (std::size_t i = 0; i < n; ++i) naive += x[i] * y[i];
    CHECK(k.dot(x.data(), y.data(), n) == doctest::Approx(naive).epsilon(1e-12));
  }
  const std::size_t m = 5, kk = 6, n = 7;
  auto a = random_vec(rng, m * kk, 0.3);
  auto b = random_vec(rng, kk * n);
  std::vector<double> c(m * n, 0.0);
  k.gemm_nn(a.data(), b.data(), c.data(), m, kk, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < kk; ++p) s += a[i * kk + p] * b[p * n + j];
      CHECK(c[i * n + j] == doctest::Approx(s).epsilon(1e-12));
    }
  }
}

TEST_CASE("vector backends are bit-identical to the scalar reference") {
  const auto backends = vector_backends();
  if (backends.empty()) {
    MESSAGE("no vector backend available on this CPU; equivalence vacuous");
    return;
  }
  const auto& ref = sdg::simd::scalar_kernels();
  sdg::Rng rng(42);
  for (const KernelTable* t : backends) {
    CAPTURE(sdg::simd::isa_name(t->isa));
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = static_cast<std::size_t>(rng.below(70));
      auto x = random_vec(rng, n);
      auto y = random_vec(rng, n);
      const double d_ref = ref.dot(x.data(), y.data(), n);
      const double d_vec = t->dot(x.data(), y.data(), n);
      REQUIRE(std::memcmp(&d_ref, &d_vec, sizeof(double)) == 0);

      const double alpha = rng.uniform(-2.0, 2.0);
      auto y_ref = y;
      auto y_vec = y;
      ref.axpy(alpha, x.data(), y_ref.data(), n);
      t->axpy(alpha, x.data(), y_vec.data(), n);
      REQUIRE(bit_equal(y_ref, y_vec));

      const std::size_t m = 1 + rng.below(9), k = 1 + rng.below(19), nn = 1 + rng.below(19);
      auto a = random_vec(rng, m * k, 0.4);
      auto b = random_vec(rng, k * nn);
      auto bt = random_vec(rng, nn * k);
      auto bm = random_vec(rng, m * nn);
      auto c0 = random_vec(rng, m * nn);
      auto c_ref = c0, c_vec = c0;
      ref.gemm_nn(a.data(), b.data(), c_ref.data(), m, k, nn);
      t->gemm_nn(a.data(), b.data(), c_vec.data(), m, k, nn);
      REQUIRE(bit_equal(c_ref, c_vec));

      c_ref = c0;
      c_vec = c0;
      ref.gemm_nt(a.data(), bt.data(), c_ref.data(), m, k, nn);
      t->gemm_nt(a.data(), bt.data(), c_vec.data(), m, k, nn);
      REQUIRE(bit_equal(c_ref, c_vec));

      std::vector<double> g_ref(k * nn, 0.5), g_vec(k * nn, 0.5);
      ref.gemm_tn(a.data(), bm.data(), g_ref.data(), m, k, nn);
      t->gemm_tn(a.data(), bm.data(), g_vec.data(), m, k, nn);
      REQUIRE(bit_equal(g_ref, g_vec));
    }
  }
}

TEST_CASE("matrix products route through the selected backend identically") {
  sdg::Rng rng(5);
  sdg::Matrix a(13, 9), b(9, 11);
  for (double& v : a.values()) v = rng.uniform(-1, 1);
  for (double& v : b.values()) v = rng.uniform(-1, 1);
  const auto original = sdg::simd::active().isa;
  sdg::simd::select(sdg::simd::Isa::kScalar);
  const sdg::Matrix ref = sdg::matmul(a, b);
  const sdg::Matrix ref_tn = sdg::matmul_tn(a, a);
  for (const KernelTable* t : vector_backends()) {
    sdg::simd::select(t->isa);
    CHECK(sdg::matmul(a, b) == ref);
    CHECK(sdg::matmul_tn(a, a) == ref_tn);
  }
  sdg::simd::select(original);
}

TEST_CASE("isa names and selection errors") {
  CHECK(sdg::simd::parse_isa("avx2") == sdg::simd::Isa::kAvx2);
  CHECK(!sdg::simd::parse_isa("sse9"));
  CHECK(sdg::simd::isa_available(sdg::simd::Isa::kScalar));
  if (!sdg::simd::isa_available(sdg::simd::Isa::kNeon)) {
    CHECK_THROWS_AS(sdg::simd::select(sdg::simd::Isa::kNeon), sdg::Error);
  }
}

TEST_CASE("sparse times dense matches the dense product") {
  sdg::Rng rng(9);
  std::vector<sdg::CsrMatrix::Triplet> t;
  for (std::uint32_t r = 0; r < 6; ++r) {
    for (std::uint32_t c = 0; c < 5; ++c) {
      if (rng.bernoulli(0.4)) t.push_back({r, c, rng.uniform(-1, 1)});
    }
  }
  t.push_back({0, 0, 1.0});
  t.push_back({0, 0, 2.0});
  const auto s = sdg::CsrMatrix::from_triplets(6, 5, t);
  sdg::Matrix b(5, 4);
  for (double& v : b.values()) v = rng.uniform(-1, 1);
  const sdg::Matrix dense = s.to_dense();
  const sdg::Matrix got = sdg::spmm(s, b);
  const sdg::Matrix want = sdg::matmul(dense, b);
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got.values()[i] == doctest::Approx(want.values()[i]).epsilon(1e-12));
  }
  CHECK(s.transposed().transposed().to_dense() == dense);
}
