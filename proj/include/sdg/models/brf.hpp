// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sdg/common.hpp"
#include "sdg/features.hpp"
#include "sdg/rng.hpp"

// Balanced random forest over bag-of-words rows.
namespace sdg::models {

struct BrfConfig {
  int n_trees = 100;
  int max_depth = 32;
  std::uint64_t seed = 0;
  // 0 uses the hardware concurrency. Results do not depend on it.
  int threads = 0;
};

using ClassHistogram = std::array<int, kNumClasses>;

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // go left when value <= threshold
  int left = -1;
  int right = -1;
  ClassHistogram histogram{};  // training samples reaching this node
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  const TreeNode& leaf_for(const features::SparseRow& row) const;
  int depth() const;
};

struct BrfModel {
  BrfConfig config;
  std::size_t n_features = 0;
  std::uint64_t vocab_hash = 0;
  std::vector<DecisionTree> trees;

  // Mean over trees of each leaf's normalized histogram. Throws
  // sdg::Error(kInvalidArgument) for a column >= n_features.
  ProbabilityVector predict_proba(const features::SparseRow& row) const;
  int predict(const features::SparseRow& row) const { return argmax(predict_proba(row)); }
};

// For every class present, m draws with replacement from that class, where m
// is the size of the smallest present class. Returns sample indices grouped
// by ascending class.
std::vector<std::size_t> balanced_bootstrap(std::span<const int> classes, Rng& rng);

// Throws sdg::Error(kInvalidArgument) for an empty or single-class training
// set, or mismatched lengths.
BrfModel train_brf(std::span<const features::SparseRow> rows, std::span<const int> classes,
                   std::size_t n_features, const BrfConfig& config = {});
BrfModel train_brf(const features::FeatureMatrix& X, const features::LabelVector& y,
                   std::span<const std::string> train_ids, const BrfConfig& config = {});

nlohmann::json to_json(const BrfModel& m);
BrfModel brf_from_json(const nlohmann::json& j);

}  // namespace sdg::models
