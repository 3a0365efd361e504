// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sdg/features.hpp"
#include "sdg/graph_store.hpp"
#include "sdg/matrix.hpp"
#include "sdg/models/gcn.hpp"

namespace sdg::models {

struct ClusterAssignment {
  std::vector<std::string> nodes;  // summary-graph order
  std::vector<int> cluster;        // parallels nodes; ids ordered by smallest member
  int k = 0;
  std::vector<std::optional<int>> mean_score;  // per cluster, set by assign_mean_scores

  std::vector<std::vector<std::size_t>> members() const;
};

// Partitions the summary graph into exactly K clusters.
class ClusterBackend {
 public:
  virtual ~ClusterBackend() = default;
  virtual ClusterAssignment cluster(const graph::SummaryGraph& sg, int k, std::uint64_t seed) const = 0;
};

// Greedy modularity agglomeration from singletons. Each step merges the
// connected pair with the largest gain 2m*L_ij - k_i*k_j (negative gains
// included), ties by smaller combined size, then by smallest member ids.
// Once no connected pair is left, the two smallest clusters merge. The seed
// is unused; the procedure is deterministic.
class GreedyModularity final : public ClusterBackend {
 public:
  ClusterAssignment cluster(const graph::SummaryGraph& sg, int k, std::uint64_t seed) const override;
};

// Throws sdg::Error(kInvalidArgument) unless 1 <= K <= node count.
ClusterAssignment cluster_graph(const graph::SummaryGraph& sg, int k = 50, std::uint64_t seed = 0);

enum class MeanRounding { kHalfAwayFromZero, kHalfToEven };

// Rounded mean score of the labeled members of each cluster; nullopt for
// clusters without labels.
std::vector<std::optional<int>> cluster_mean_scores(const ClusterAssignment& assign,
                                                    const features::LabelVector& y,
                                                    MeanRounding rounding = MeanRounding::kHalfAwayFromZero);
void assign_mean_scores(ClusterAssignment& assign, const features::LabelVector& y,
                        MeanRounding rounding = MeanRounding::kHalfAwayFromZero);

// Labels for every node of the assignment. Members of a labeled cluster take
// its rounded mean; the rest take `fallback` (class indices). Throws
// sdg::Error(kNotFound) if a node needing a fallback has none.
features::LabelVector propagate_cluster_labels(const ClusterAssignment& assign, const features::LabelVector& y,
                                               const std::map<std::string, int>& fallback,
                                               MeanRounding rounding = MeanRounding::kHalfAwayFromZero);
// Fallback classes from a GCN; `x` holds one row per model node.
features::LabelVector propagate_cluster_labels(const ClusterAssignment& assign, const features::LabelVector& y,
                                               const GcnModel& fallback, const CsrMatrix& x,
                                               MeanRounding rounding = MeanRounding::kHalfAwayFromZero);

}  // namespace sdg::models
