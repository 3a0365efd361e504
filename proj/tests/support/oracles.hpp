// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference computations for tests. Nothing here may call into
// the code paths it is used to check.

#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "sdg/rng.hpp"

namespace sdg::testing {

struct EdgeTriple {
  std::string subject;
  std::string relation;
  std::string object;
};

// Random typed multigraph on nodes "n0".."n{n-1}". Every node appears in at
// least one edge (a self-loop if need be) so loaders see all of them.
inline std::vector<EdgeTriple> random_typed_edges(Rng& rng, int n, double p,
                                                  int relation_types = 3) {
  std::vector<EdgeTriple> edges;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (!rng.bernoulli(p)) continue;
      const bool forward = rng.bernoulli(0.5);
      const int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(relation_types)));
      const int s = forward ? a : b;
      const int o = forward ? b : a;
      edges.push_back({"n" + std::to_string(s), "r" + std::to_string(r), "n" + std::to_string(o)});
      if (rng.bernoulli(0.1)) {
        edges.push_back({"n" + std::to_string(o), "r" + std::to_string(r), "n" + std::to_string(s)});
      }
      seen[static_cast<std::size_t>(a)] = seen[static_cast<std::size_t>(b)] = 1;
    }
  }
  for (int v = 0; v < n; ++v) {
    if (!seen[static_cast<std::size_t>(v)]) {
      edges.push_back({"n" + std::to_string(v), "self", "n" + std::to_string(v)});
    }
  }
  return edges;
}

inline constexpr int kUnreachable = std::numeric_limits<int>::max() / 4;

// All-pairs undirected hop distances by Floyd-Warshall over node indices
// parsed from the "n<k>" ids. Self-loops carry no distance.
inline std::vector<std::vector<int>> floyd_warshall(int n, const std::vector<EdgeTriple>& edges) {
  std::vector<std::vector<int>> d(static_cast<std::size_t>(n),
                                  std::vector<int>(static_cast<std::size_t>(n), kUnreachable));
  for (int i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : edges) {
    const int a = std::stoi(e.subject.substr(1));
    const int b = std::stoi(e.object.substr(1));
    if (a == b) continue;
    d[a][b] = d[b][a] = 1;
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
      }
    }
  }
  return d;
}

}  // namespace sdg::testing
