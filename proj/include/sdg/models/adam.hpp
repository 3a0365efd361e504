// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "sdg/matrix.hpp"

namespace sdg::models {

struct AdamConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam over a fixed list of parameter tensors.
class Adam {
 public:
  Adam(std::span<Matrix* const> params, AdamConfig config = {});

  // Minimizes: p -= lr * m_hat / (sqrt(v_hat) + eps). `grads` parallels the
  // parameter list given at construction.
  void step(std::span<const Matrix* const> grads);
  long long iterations() const { return t_; }

 private:
  std::vector<Matrix*> params_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  AdamConfig config_;
  long long t_ = 0;
};

}  // namespace sdg::models
