// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "sdg/error.hpp"
#include "sdg/explain.hpp"
#include "sdg/rng.hpp"

namespace sdg::explain {

double TermAttribution::weight_of(std::size_t column) const {
  auto it = coefficients.find(column);
  return it == coefficients.end() ? 0.0 : it->second;
}

namespace {

ProbabilityVector call(const PredictFn& predict, const features::SparseRow& row, int sample) {
  ProbabilityVector p;
  try {
    p = predict(row);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::kInvalidArgument,
                "lime: predict_fn failed on sample " + std::to_string(sample) + ": " + e.what());
  }
  for (double v : p) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kNumeric, "lime: non-finite probability on sample " + std::to_string(sample));
    }
  }
  return p;
}

}  // namespace

TermAttribution lime_explain(const PredictFn& predict, const features::SparseRow& x,
                             const features::Vocabulary& vocab, const LimeConfig& config) {
  std::vector<std::size_t> cols;
  std::vector<int> counts;
  for (auto [c, v] : x) {
    if (v == 0) continue;
    if (c >= vocab.size()) throw Error(ErrorKind::kInvalidArgument, "lime: column outside the vocabulary");
    cols.push_back(c);
    counts.push_back(v);
  }
  if (cols.empty()) throw Error(ErrorKind::kInvalidArgument, "lime: row has no terms to perturb");
  if (config.n_samples < 10) throw Error(ErrorKind::kInvalidArgument, "lime: need at least 10 samples");
  if (!(config.keep_probability > 0.0 && config.keep_probability <= 1.0) || !(config.kernel_width > 0.0) ||
      config.ridge < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "lime: bad sampler or surrogate settings");
  }

  const auto p = static_cast<Eigen::Index>(cols.size());
  const auto n = static_cast<Eigen::Index>(config.n_samples);
  TermAttribution out;
  out.probs = call(predict, x, 0);
  out.predicted_class = argmax(out.probs);
  const auto cls = static_cast<std::size_t>(out.predicted_class);

  Rng rng(config.seed);
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, p);
  Eigen::VectorXd y(n), w(n);
  z.row(0).setOnes();
  y(0) = out.probs[cls];
  for (Eigen::Index s = 1; s < n; ++s) {
    int kept = 0;
    while (kept == 0) {
      for (Eigen::Index j = 0; j < p; ++j) {
        const bool keep = rng.bernoulli(config.keep_probability);
        z(s, j) = keep ? 1.0 : 0.0;
        kept += keep;
      }
    }
    features::SparseRow row;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (z(s, j) != 0.0) row[cols[static_cast<std::size_t>(j)]] = counts[static_cast<std::size_t>(j)];
    }
    y(s) = call(predict, row, static_cast<int>(s))[cls];
  }
  for (Eigen::Index s = 0; s < n; ++s) {
    const double cosine = std::sqrt(z.row(s).sum() / static_cast<double>(p));
    const double d = 1.0 - cosine;
    w(s) = std::exp(-(d * d) / config.kernel_width);
  }

  const double wsum = w.sum();
  const Eigen::RowVectorXd zbar = (w.transpose() * z) / wsum;
  const double ybar = w.dot(y) / wsum;
  const Eigen::MatrixXd zc = z.rowwise() - zbar;
  const Eigen::VectorXd yc = y.array() - ybar;
  Eigen::MatrixXd a = zc.transpose() * w.asDiagonal() * zc;
  a.diagonal().array() += config.ridge;
  const Eigen::VectorXd b = zc.transpose() * (w.array() * yc.array()).matrix();
  const Eigen::VectorXd beta = a.ldlt().solve(b);
  if (!beta.allFinite()) throw Error(ErrorKind::kNumeric, "lime: surrogate solve failed");
  out.intercept = ybar - zbar.dot(beta);

  const Eigen::VectorXd resid = yc - zc * beta;
  const double ss_res = (w.array() * resid.array().square()).sum();
  const double ss_tot = (w.array() * yc.array().square()).sum();
  out.weighted_r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

  std::vector<std::size_t> order(cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    order[j] = j;
    out.coefficients[cols[j]] = beta(static_cast<Eigen::Index>(j));
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::abs(beta(static_cast<Eigen::Index>(i))) > std::abs(beta(static_cast<Eigen::Index>(j)));
  });
  const std::size_t m = std::min(cols.size(), static_cast<std::size_t>(std::max(config.top_m, 0)));
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t j = order[k];
    out.terms.push_back({vocab.term(cols[j]), cols[j], beta(static_cast<Eigen::Index>(j))});
  }
  return out;
}

std::vector<TermAttribution> lime_explain_all(const PredictFn& predict, std::span<const features::SparseRow> rows,
                                              const features::Vocabulary& vocab, const LimeConfig& config,
                                              int threads) {
  std::vector<TermAttribution> out(rows.size());
  std::vector<std::exception_ptr> errors(rows.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      try {
        LimeConfig c = config;
        c.seed = derive_seed(config.seed, i);
        out[i] = lime_explain(predict, rows[i], vocab, c);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned hw = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::min<std::size_t>(hw, rows.size()); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace sdg::explain
