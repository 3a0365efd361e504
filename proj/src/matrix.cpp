// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdg/matrix.hpp"

#include <cmath>
#include <string>

#include "sdg/error.hpp"
#include "sdg/simd/kernels.hpp"

namespace sdg {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::kInvalidArgument, what);
}

}  // namespace

bool Matrix::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                   std::vector<Triplet> triplets) {
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.assign(rows + 1, 0);
  bool have_last = false;
  Triplet last{};
  for (const Triplet& t : triplets) {
    require(t.row < rows && t.col < cols, "CsrMatrix: triplet out of bounds");
    if (have_last && last.row == t.row && last.col == t.col) {
      m.val.back() += t.value;
      continue;
    }
    m.col.push_back(t.col);
    m.val.push_back(t.value);
    ++m.row_ptr[t.row + 1];
    last = t;
    have_last = true;
  }
  for (std::size_t r = 0; r < rows; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
  return m;
}

CsrMatrix CsrMatrix::transposed() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) {
      t.push_back({col[p], static_cast<std::uint32_t>(r), val[p]});
    }
  }
  return from_triplets(cols, rows, std::move(t));
}

Matrix CsrMatrix::to_dense() const {
  Matrix d(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) d(r, col[p]) += val[p];
  }
  return d;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "matmul: shape mismatch");
  Matrix c(a.rows(), b.cols());
  simd::active().gemm_nn(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), "matmul_tn: shape mismatch");
  Matrix c(a.cols(), b.cols());
  simd::active().gemm_tn(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.cols(), "matmul_nt: shape mismatch");
  Matrix c(a.rows(), b.rows());
  simd::active().gemm_nt(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.rows());
  return c;
}

Matrix spmm(const CsrMatrix& a, const Matrix& b) {
  require(a.cols == b.rows(), "spmm: shape mismatch");
  Matrix c(a.rows, b.cols());
  const auto& k = simd::active();
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) {
      k.axpy(a.val[p], b.row(a.col[p]).data(), c.row(r).data(), b.cols());
    }
  }
  return c;
}

void add_inplace(Matrix& dst, const Matrix& src) {
  require(dst.rows() == src.rows() && dst.cols() == src.cols(),
          "add_inplace: shape mismatch");
  simd::active().axpy(1.0, src.data(), dst.data(), dst.size());
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    auto in = logits.row(r);
    auto o = out.row(r);
    double mx = in.empty() ? 0.0 : in[0];
    for (double v : in) mx = std::max(mx, v);
    double sum = 0.0;
    for (std::size_t c = 0; c < in.size(); ++c) {
      o[c] = std::exp(in[c] - mx);
      sum += o[c];
    }
    for (double& v : o) v /= sum;
  }
  return out;
}

}  // namespace sdg
