// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

// Typed knowledge graph loaded from a TSV edge list, plus the company-only
// summary graph derived from it.
//
// Distances everywhere in this module ignore edge direction and relation
// type; parallel edges count once and self-loops are skipped.
namespace sdg::graph {

using NodeIndex = std::uint32_t;

struct Entity {
  std::string id;
  std::string label;
  bool is_company = false;
};

struct TypedEdge {
  NodeIndex subject;
  std::uint32_t relation;
  NodeIndex object;

  friend bool operator==(const TypedEdge&, const TypedEdge&) = default;
};

class KnowledgeGraph {
 public:
  class Builder;

  KnowledgeGraph() = default;

  std::size_t entity_count() const { return entities_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t relation_count() const { return relations_.size(); }

  const Entity& entity(NodeIndex i) const { return entities_[i]; }
  std::span<const Entity> entities() const { return entities_; }
  std::span<const TypedEdge> edges() const { return edges_; }
  // In order of first appearance.
  std::span<const std::string> relation_types() const { return relations_; }
  const std::string& relation(std::uint32_t r) const { return relations_[r]; }

  std::optional<NodeIndex> find(std::string_view id) const;
  // Throws sdg::Error(kNotFound).
  NodeIndex require(std::string_view id) const;

  // Distinct undirected neighbors, ascending, self excluded.
  std::span<const NodeIndex> neighbors(NodeIndex i) const {
    return {adjacency_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  std::vector<std::string> company_ids() const;

  // Copy with the is_company flag set exactly on `ids`.
  // Throws sdg::Error(kNotFound) for an unknown id.
  KnowledgeGraph with_companies(std::span<const std::string> ids) const;

 private:
  void index_adjacency();

  std::vector<Entity> entities_;
  std::vector<TypedEdge> edges_;
  std::vector<std::string> relations_;
  std::unordered_map<std::string, NodeIndex> by_id_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeIndex> adjacency_;
};

class KnowledgeGraph::Builder {
 public:
  NodeIndex add_entity(std::string_view id, std::string_view label = {},
                       bool is_company = false);
  void add_edge(std::string_view subject, std::string_view relation,
                std::string_view object);
  KnowledgeGraph build() &&;

 private:
  KnowledgeGraph g_;
  std::unordered_map<std::string, std::uint32_t> relation_index_;
};

// `subject<TAB>relation<TAB>object` per line; blank lines and lines starting
// with '#' are skipped. Throws sdg::Error(kIo) if unreadable and
// sdg::Error(kParse) naming the line number for a malformed line.
KnowledgeGraph load_edge_list(const std::filesystem::path& path);
KnowledgeGraph read_edge_list(std::istream& in, std::string_view source_name = "<stream>");
void write_edge_list(const KnowledgeGraph& g, std::ostream& out);

// Hop distance from `source` for every entity within `max_depth`.
std::vector<std::pair<NodeIndex, int>> bounded_bfs(const KnowledgeGraph& g,
                                                   NodeIndex source, int max_depth);
std::map<std::string, int> bounded_bfs(const KnowledgeGraph& g, std::string_view source,
                                       int max_depth);

// Node-induced subgraph on every entity within two hops of a seed, so seeds
// sharing a neighborhood end up within four edges of each other. Traversal
// uses all relations; `relation_filter` only restricts which induced edges
// are kept. Seeds are flagged as companies in the output.
KnowledgeGraph extract_subgraph(const KnowledgeGraph& g,
                                std::span<const std::string> seeds,
                                const std::optional<std::set<std::string>>& relation_filter =
                                    std::nullopt);

// Undirected company graph; nodes sorted by id, edges stored as index pairs
// (lo, hi) in ascending order.
class SummaryGraph {
 public:
  SummaryGraph() = default;
  SummaryGraph(std::vector<std::string> nodes,
               std::vector<std::pair<std::string, std::string>> edges);

  std::span<const std::string> nodes() const { return nodes_; }
  std::span<const std::pair<NodeIndex, NodeIndex>> edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  std::optional<NodeIndex> find(std::string_view id) const;
  NodeIndex require(std::string_view id) const;
  bool has_edge(std::string_view a, std::string_view b) const;

  std::span<const NodeIndex> neighbors(NodeIndex i) const { return adjacency_[i]; }

 private:
  std::vector<std::string> nodes_;
  std::vector<std::pair<NodeIndex, NodeIndex>> edges_;
  std::vector<std::vector<NodeIndex>> adjacency_;
};

// Edge {a, b} iff a != b and their distance in `g` is at most `step_threshold`.
SummaryGraph build_summary_graph(const KnowledgeGraph& g,
                                 std::span<const std::string> companies,
                                 int step_threshold = 2);

std::map<int, int> degree_histogram(const SummaryGraph& sg);
// Same histogram over the undirected simple view of a knowledge graph.
std::map<int, int> degree_histogram(const KnowledgeGraph& g);

// Fraction of unordered company pairs whose distance is <= d, for
// d = 1..max_depth (element d-1).
std::vector<double> pair_reachability(const KnowledgeGraph& g,
                                      std::span<const std::string> companies,
                                      int max_depth);

// `a<TAB>b` per edge, a < b, sorted.
void write_summary_tsv(const SummaryGraph& sg, std::ostream& out);
// Every node appears in the output header comment so isolated companies
// survive a round trip.
SummaryGraph read_summary_tsv(std::istream& in, std::string_view source_name = "<stream>");
// `degree,count` with a header row, ascending degree.
void write_degree_csv(const std::map<int, int>& histogram, std::ostream& out);

}  // namespace sdg::graph
