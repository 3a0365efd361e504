// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdg/models/adam.hpp"

#include <cmath>

#include "sdg/error.hpp"

namespace sdg::models {

Adam::Adam(std::span<Matrix* const> params, AdamConfig config)
    : params_(params.begin(), params.end()), config_(config) {
  for (const Matrix* p : params_) {
    m_.emplace_back(p->rows(), p->cols());
    v_.emplace_back(p->rows(), p->cols());
  }
}

void Adam::step(std::span<const Matrix* const> grads) {
  if (grads.size() != params_.size()) {
    throw Error(ErrorKind::kInvalidArgument, "adam: gradient count does not match parameters");
  }
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    auto p = params_[k]->values();
    auto g = grads[k]->values();
    auto m = m_[k].values();
    auto v = v_[k].values();
    if (g.size() != p.size()) throw Error(ErrorKind::kInvalidArgument, "adam: gradient shape mismatch");
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g[i];
      v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g[i] * g[i];
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      p[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }
}

}  // namespace sdg::models
