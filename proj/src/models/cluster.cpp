// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdg/models/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "sdg/common.hpp"
#include "sdg/error.hpp"

namespace sdg::models {

namespace {

struct Group {
  std::vector<std::size_t> members;  // ascending
  std::int64_t degree = 0;
  bool alive = true;
};

int round_mean(double mean, MeanRounding rounding) {
  if (rounding == MeanRounding::kHalfToEven) return static_cast<int>(std::nearbyint(mean));
  return static_cast<int>(std::round(mean));
}

}  // namespace

std::vector<std::vector<std::size_t>> ClusterAssignment::members() const {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < cluster.size(); ++i) out[static_cast<std::size_t>(cluster[i])].push_back(i);
  return out;
}

ClusterAssignment GreedyModularity::cluster(const graph::SummaryGraph& sg, int k, std::uint64_t) const {
  const std::size_t n = sg.node_count();
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw Error(ErrorKind::kInvalidArgument,
                "cluster count " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
  std::vector<Group> groups(n);
  std::vector<std::map<std::size_t, std::int64_t>> links(n);
  for (std::size_t i = 0; i < n; ++i) groups[i].members = {i};
  std::int64_t m = 0;
  for (auto [a, b] : sg.edges()) {
    if (a == b) continue;
    ++groups[a].degree;
    ++groups[b].degree;
    ++links[a][b];
    ++links[b][a];
    ++m;
  }

  auto merge = [&](std::size_t i, std::size_t j) {
    if (groups[j].members.front() < groups[i].members.front()) std::swap(i, j);
    for (auto [other, w] : links[j]) {
      if (other == i) continue;
      links[i][other] += w;
      links[other][i] += w;
      links[other].erase(j);
    }
    links[i].erase(j);
    links[j].clear();
    auto& dst = groups[i].members;
    dst.insert(dst.end(), groups[j].members.begin(), groups[j].members.end());
    std::sort(dst.begin(), dst.end());
    groups[i].degree += groups[j].degree;
    groups[j].alive = false;
    groups[j].members.clear();
  };

  // Group index == smallest member while alive, so index order is id order.
  for (std::size_t remaining = n; remaining > static_cast<std::size_t>(k); --remaining) {
    bool found = false;
    std::size_t bi = 0, bj = 0;
    std::int64_t best_gain = 0;
    std::size_t best_size = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!groups[i].alive) continue;
      for (auto it = links[i].upper_bound(i); it != links[i].end(); ++it) {
        const std::size_t j = it->first;
        const std::int64_t gain = 2 * m * it->second - groups[i].degree * groups[j].degree;
        const std::size_t size = groups[i].members.size() + groups[j].members.size();
        if (!found || gain > best_gain || (gain == best_gain && size < best_size)) {
          found = true;
          best_gain = gain;
          best_size = size;
          bi = i;
          bj = j;
        }
      }
    }
    if (!found) {
      // No connected pair left: the two smallest clusters, ties by id.
      std::vector<std::pair<std::size_t, std::size_t>> by_size;
      for (std::size_t i = 0; i < n; ++i) {
        if (groups[i].alive) by_size.push_back({groups[i].members.size(), i});
      }
      std::partial_sort(by_size.begin(), by_size.begin() + 2, by_size.end());
      bi = by_size[0].second;
      bj = by_size[1].second;
    }
    merge(bi, bj);
  }

  ClusterAssignment out;
  out.nodes.assign(sg.nodes().begin(), sg.nodes().end());
  out.cluster.assign(n, -1);
  out.k = k;
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!groups[i].alive) continue;
    for (std::size_t v : groups[i].members) out.cluster[v] = next;
    ++next;
  }
  out.mean_score.assign(static_cast<std::size_t>(k), std::nullopt);
  return out;
}

ClusterAssignment cluster_graph(const graph::SummaryGraph& sg, int k, std::uint64_t seed) {
  return GreedyModularity{}.cluster(sg, k, seed);
}

std::vector<std::optional<int>> cluster_mean_scores(const ClusterAssignment& assign, const features::LabelVector& y,
                                                    MeanRounding rounding) {
  std::vector<std::optional<int>> out(static_cast<std::size_t>(assign.k));
  std::vector<long long> sum(out.size(), 0);
  std::vector<int> count(out.size(), 0);
  for (std::size_t i = 0; i < assign.nodes.size(); ++i) {
    auto it = y.values.find(assign.nodes[i]);
    if (it == y.values.end()) continue;
    const auto c = static_cast<std::size_t>(assign.cluster[i]);
    sum[c] += decode_class(it->second);
    ++count[c];
  }
  for (std::size_t c = 0; c < out.size(); ++c) {
    if (count[c] > 0) out[c] = round_mean(static_cast<double>(sum[c]) / count[c], rounding);
  }
  return out;
}

void assign_mean_scores(ClusterAssignment& assign, const features::LabelVector& y, MeanRounding rounding) {
  assign.mean_score = cluster_mean_scores(assign, y, rounding);
}

features::LabelVector propagate_cluster_labels(const ClusterAssignment& assign, const features::LabelVector& y,
                                               const std::map<std::string, int>& fallback, MeanRounding rounding) {
  const auto means = cluster_mean_scores(assign, y, rounding);
  features::LabelVector out;
  out.sdg = y.sdg;
  for (std::size_t i = 0; i < assign.nodes.size(); ++i) {
    const auto& mean = means[static_cast<std::size_t>(assign.cluster[i])];
    if (mean) {
      out.values[assign.nodes[i]] = encode_score(*mean);
      continue;
    }
    auto it = fallback.find(assign.nodes[i]);
    if (it == fallback.end()) throw Error(ErrorKind::kNotFound, "no fallback label for " + assign.nodes[i]);
    out.values[assign.nodes[i]] = it->second;
  }
  return out;
}

features::LabelVector propagate_cluster_labels(const ClusterAssignment& assign, const features::LabelVector& y,
                                               const GcnModel& fallback, const CsrMatrix& x, MeanRounding rounding) {
  const auto preds = predict_gcn(fallback, x, assign.nodes);
  std::map<std::string, int> classes;
  for (const auto& p : preds) classes[p.id] = p.cls;
  return propagate_cluster_labels(assign, y, classes, rounding);
}

}  // namespace sdg::models
