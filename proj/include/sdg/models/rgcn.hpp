// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sdg/features.hpp"
#include "sdg/graph_store.hpp"
#include "sdg/matrix.hpp"
#include "sdg/models/adam.hpp"
#include "sdg/models/gcn.hpp"

// Relational GCN on the knowledge graph. Each layer computes
//   h'_i = act(h_i W_self + sum_r mean_{j in N_r(i)} h_j W_r)
// with ReLU after the first layer and softmax after the second. Edges count
// in both directions; parallel edges of one relation collapse.
namespace sdg::models {

struct RgcnConfig {
  int hidden = 16;
  int epochs = 5000;
  AdamConfig adam;
  std::uint64_t seed = 0;
  int min_relation_count = 10;  // rarer relations share one "other" slot
  double embedding_scale = 0.1;  // non-company embeddings start in U(-s, s)
};

struct RelationalGraph {
  // Companies first, in the order given, then the remaining entities in
  // knowledge-graph order.
  std::vector<std::string> node_ids;
  std::size_t company_count = 0;
  std::vector<std::string> relations;
  // Directed neighbor pairs (i, j) per relation, both directions present.
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> links;
  std::vector<CsrMatrix> adjacency;    // row-normalized, one per relation
  std::vector<CsrMatrix> adjacency_t;  // transposes, for backpropagation

  std::size_t node_count() const { return node_ids.size(); }
  std::size_t other_count() const { return node_ids.size() - company_count; }
  std::optional<std::size_t> find(std::string_view id) const;
};

// Rebuilds adjacency and adjacency_t from links.
void normalize_links(RelationalGraph& g);

// Throws sdg::Error(kNotFound) for a company entity missing from `kg`.
RelationalGraph build_relational_graph(const graph::KnowledgeGraph& kg,
                                       std::span<const std::string> company_entities,
                                       int min_relation_count = 10);

struct RgcnParams {
  Matrix embeddings;           // other_count x input_dim
  std::vector<Matrix> w1;      // [self, r...], input_dim x hidden
  std::vector<Matrix> w2;      // [self, r...], hidden x 7
};

struct RgcnForward {
  std::vector<Matrix> t1;  // H0 W1_k
  Matrix h1_pre;
  Matrix h1;
  std::vector<Matrix> t2;  // H1 W2_k
  Matrix logits;
  Matrix probs;
};

struct RgcnGrads {
  Matrix embeddings;
  std::vector<Matrix> w1;
  std::vector<Matrix> w2;
  double loss = 0.0;
};

RgcnParams init_rgcn_params(const RelationalGraph& g, std::size_t input_dim, const RgcnConfig& config);

// `x` holds the company rows (company_count x input_dim).
RgcnForward rgcn_forward(const RelationalGraph& g, const CsrMatrix& x, const RgcnParams& p);
// `labels` covers every node; only company rows may be labeled.
RgcnGrads rgcn_backward(const RelationalGraph& g, const CsrMatrix& x, const RgcnParams& p,
                        const RgcnForward& f, std::span<const int> labels);

struct RgcnModel {
  RgcnConfig config;
  RelationalGraph graph;
  RgcnParams params;
  std::size_t input_dim = 0;
  std::uint64_t vocab_hash = 0;
  std::vector<double> loss_history;
};

// `labels` parallels the company rows, -1 for unlabeled.
RgcnModel train_rgcn(const RelationalGraph& g, const CsrMatrix& x, std::span<const int> company_labels,
                     const RgcnConfig& config = {});

// Probabilities for the company rows.
Matrix predict_rgcn(const RgcnModel& m, const CsrMatrix& x);

nlohmann::json to_json(const RgcnModel& m);
RgcnModel rgcn_from_json(const nlohmann::json& j);

}  // namespace sdg::models
