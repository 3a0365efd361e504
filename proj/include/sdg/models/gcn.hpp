// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sdg/common.hpp"
#include "sdg/features.hpp"
#include "sdg/graph_store.hpp"
#include "sdg/matrix.hpp"
#include "sdg/models/adam.hpp"

// Two-layer graph convolutional network on the company summary graph:
// Z = softmax(Â ReLU(Â X W1) W2), Â = D^-1/2 (A + I) D^-1/2, no biases.
namespace sdg::models {

struct GcnConfig {
  int hidden = 16;
  int epochs = 5000;
  AdamConfig adam;
  std::uint64_t seed = 0;
};

struct GcnParams {
  Matrix w1;  // input_dim x hidden
  Matrix w2;  // hidden x 7
};

// Intermediate values kept for backpropagation and explanation.
struct GcnForward {
  Matrix xw1;     // X W1
  Matrix h1_pre;  // Â X W1
  Matrix h1;      // ReLU
  Matrix h1w2;    // H1 W2
  Matrix logits;  // Â H1 W2
  Matrix probs;
};

struct GcnGrads {
  Matrix w1;
  Matrix w2;
  double loss = 0.0;
};

CsrMatrix normalized_adjacency(std::size_t n, std::span<const std::pair<graph::NodeIndex, graph::NodeIndex>> edges);
CsrMatrix normalized_adjacency(const graph::SummaryGraph& sg);

// Glorot-uniform weights.
GcnParams init_gcn_params(std::size_t input_dim, int hidden, std::uint64_t seed);

GcnForward gcn_forward(const CsrMatrix& a_hat, const CsrMatrix& x, const GcnParams& p);

// Mean cross-entropy over rows with labels[i] >= 0 (labels[i] < 0 means
// unlabeled). Throws sdg::Error(kInvalidArgument) if no row is labeled.
double masked_cross_entropy(const Matrix& probs, std::span<const int> labels);

// Gradient of masked_cross_entropy with respect to W1 and W2.
GcnGrads gcn_backward(const CsrMatrix& a_hat, const CsrMatrix& x, const GcnParams& p,
                      const GcnForward& f, std::span<const int> labels);

struct GcnModel {
  GcnConfig config;
  std::vector<std::string> nodes;  // summary-graph order
  std::vector<std::pair<graph::NodeIndex, graph::NodeIndex>> edges;
  CsrMatrix a_hat;
  GcnParams params;
  std::size_t input_dim = 0;
  std::uint64_t vocab_hash = 0;
  std::vector<double> loss_history;

  std::optional<std::size_t> find(std::string_view id) const;
};

// `x` has one row per summary-graph node in node order; labels parallel the
// nodes with -1 for nodes outside the training mask. Throws
// sdg::Error(kInvalidArgument) for an empty mask or shape mismatch and
// sdg::Error(kNumeric) if the loss or parameters stop being finite.
GcnModel train_gcn(const graph::SummaryGraph& sg, const CsrMatrix& x, std::span<const int> labels,
                   const GcnConfig& config = {});
GcnModel train_gcn(const graph::SummaryGraph& sg, const features::FeatureMatrix& X,
                   const features::LabelVector& y, std::span<const std::string> train_ids,
                   const GcnConfig& config = {});

// Sparse rows of `X` for `ids` in order. Throws sdg::Error(kNotFound).
CsrMatrix feature_rows(const features::FeatureMatrix& X, std::span<const std::string> ids);

struct NodePrediction {
  std::string id;
  int cls = 0;
  ProbabilityVector probs{};
};

// Full-graph probabilities, one row per model node.
Matrix predict_gcn_all(const GcnModel& m, const CsrMatrix& x);
// Throws sdg::Error(kNotFound) for an id outside the model's graph.
std::vector<NodePrediction> predict_gcn(const GcnModel& m, const CsrMatrix& x,
                                        std::span<const std::string> ids);

nlohmann::json to_json(const GcnModel& m);
GcnModel gcn_from_json(const nlohmann::json& j);

}  // namespace sdg::models
