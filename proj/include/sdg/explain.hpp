// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sdg/common.hpp"
#include "sdg/features.hpp"
#include "sdg/matrix.hpp"
#include "sdg/models/adam.hpp"
#include "sdg/models/gcn.hpp"
#include "sdg/relevance.hpp"

// Term attributions for bag-of-words models and edge-mask explanations for
// GCN predictions.
namespace sdg::explain {

// Must be safe to call concurrently.
using PredictFn = std::function<ProbabilityVector(const features::SparseRow&)>;

// --- LIME ------------------------------------------------------------------

struct LimeConfig {
  int n_samples = 1000;
  int top_m = 10;
  double keep_probability = 0.5;
  double kernel_width = 0.25;  // weight exp(-(1 - cos)^2 / width)
  double ridge = 1.0;          // intercept is not penalized
  std::uint64_t seed = 0;
};

struct WeightedTerm {
  std::string term;
  std::size_t column = 0;
  double weight = 0.0;
};

struct TermAttribution {
  std::string company_id;
  int sdg = 0;
  int predicted_class = 0;
  ProbabilityVector probs{};
  std::vector<WeightedTerm> terms;  // top m by |weight|, descending
  // Surrogate coefficient per nonzero column of the explained row.
  std::map<std::size_t, double> coefficients;
  double intercept = 0.0;
  double weighted_r2 = 0.0;

  // 0 for columns that were not in the explained row.
  double weight_of(std::size_t column) const;
};

// Perturbs the nonzero terms of `x` (sample 0 is `x` itself, all-dropped
// masks are redrawn), fits a weighted ridge surrogate of the predicted
// class's probability and keeps the top terms. Throws
// sdg::Error(kInvalidArgument) for an empty row, n_samples < 10, or a
// failing predict_fn, and sdg::Error(kNumeric) for non-finite outputs.
TermAttribution lime_explain(const PredictFn& predict, const features::SparseRow& x,
                             const features::Vocabulary& vocab, const LimeConfig& config = {});

// One explanation per row; row i uses seed derive_seed(config.seed, i).
// Results do not depend on `threads` (0 = hardware concurrency).
std::vector<TermAttribution> lime_explain_all(const PredictFn& predict, std::span<const features::SparseRow> rows,
                                              const features::Vocabulary& vocab, const LimeConfig& config = {},
                                              int threads = 0);

// --- Edge masks ------------------------------------------------------------

struct GnnExplainConfig {
  int steps = 200;
  double sparsity = 0.05;
  models::AdamConfig adam;
  double init_logit = 1.0;   // mask logits start at init_logit + 0.1 N(0, 1)
  std::uint64_t seed = 0;
};

struct MaskedEdge {
  std::string a;  // a < b
  std::string b;
  double weight = 0.0;
};

struct EdgeExplanation {
  std::string company_id;
  int sdg = 0;
  int predicted_class = 0;
  double unmasked_probability = 0.0;
  std::vector<MaskedEdge> edges;      // reported edges, weight descending
  std::vector<MaskedEdge> all_edges;  // every edge of the 2-hop subgraph, weight descending
  // Predicted-class probability with only the reported edges kept.
  double fidelity = 0.0;
};

// Edges among the nodes within two hops of `node`, as (a, b) model indices
// with a < b, in the model's edge order. Throws sdg::Error(kNotFound).
std::vector<std::pair<graph::NodeIndex, graph::NodeIndex>> computation_edges(const models::GcnModel& m,
                                                                             std::string_view node);

// Class probabilities of `node` when off-diagonal Â entries of the edges in
// computation_edges() are scaled by `mask` (same order).
ProbabilityVector masked_probabilities(const models::GcnModel& m, const CsrMatrix& x, std::string_view node,
                                       std::span<const double> mask);

// `x` holds one row per model node. Throws sdg::Error(kNotFound) for an
// unknown node.
EdgeExplanation gnn_explain(const models::GcnModel& m, const CsrMatrix& x, std::string_view node,
                            const GnnExplainConfig& config = {});

// --- Reports ---------------------------------------------------------------

struct ReportEntry {
  std::string company_id;
  std::string company_name;
  int sdg = 0;
  std::string model;
  int predicted_class = 0;
  ProbabilityVector probs{};
  std::optional<TermAttribution> terms;
  std::optional<EdgeExplanation> edges;
  std::vector<relevance::Evidence> evidence;
};

// Entity id -> display name, used for edge endpoints.
using NameLookup = std::map<std::string, std::string, std::less<>>;

// Evidence sentences that contain at least one of the attributed terms.
std::vector<relevance::Evidence> supporting_evidence(const TermAttribution& terms,
                                                     std::span<const relevance::Evidence> evidence);

nlohmann::json report_json(std::span<const ReportEntry> entries, const NameLookup& names = {});
std::string report_markdown(std::span<const ReportEntry> entries, const NameLookup& names = {});

}  // namespace sdg::explain
