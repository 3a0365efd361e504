// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdg/graph_store.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sdg/error.hpp"

namespace sdg::graph {

namespace {

std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

// Distances from `source`, -1 when unreachable within max_depth. `dist` is
// caller-owned scratch sized to entity_count and left all -1 on return;
// `touched` receives the visited nodes in BFS order.
void bfs_into(const KnowledgeGraph& g, NodeIndex source, int max_depth,
              std::vector<int>& dist, std::vector<NodeIndex>& touched) {
  touched.clear();
  dist[source] = 0;
  touched.push_back(source);
  for (std::size_t head = 0; head < touched.size(); ++head) {
    const NodeIndex u = touched[head];
    if (dist[u] == max_depth) continue;
    for (NodeIndex v : g.neighbors(u)) {
      if (dist[v] >= 0) continue;
      dist[v] = dist[u] + 1;
      touched.push_back(v);
    }
  }
}

}  // namespace

// --- KnowledgeGraph --------------------------------------------------------

std::optional<NodeIndex> KnowledgeGraph::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

NodeIndex KnowledgeGraph::require(std::string_view id) const {
  auto idx = find(id);
  if (!idx) throw Error(ErrorKind::kNotFound, "unknown entity: " + std::string(id));
  return *idx;
}

std::vector<std::string> KnowledgeGraph::company_ids() const {
  std::vector<std::string> out;
  for (const Entity& e : entities_) {
    if (e.is_company) out.push_back(e.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

KnowledgeGraph KnowledgeGraph::with_companies(std::span<const std::string> ids) const {
  KnowledgeGraph copy = *this;
  for (Entity& e : copy.entities_) e.is_company = false;
  for (const std::string& id : ids) copy.entities_[require(id)].is_company = true;
  return copy;
}

void KnowledgeGraph::index_adjacency() {
  const std::size_t n = entities_.size();
  std::vector<std::vector<NodeIndex>> lists(n);
  for (const TypedEdge& e : edges_) {
    if (e.subject == e.object) continue;
    lists[e.subject].push_back(e.object);
    lists[e.object].push_back(e.subject);
  }
  offsets_.assign(n + 1, 0);
  adjacency_.clear();
  for (std::size_t i = 0; i < n; ++i) {
    auto& l = lists[i];
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
    adjacency_.insert(adjacency_.end(), l.begin(), l.end());
    offsets_[i + 1] = adjacency_.size();
  }
}

NodeIndex KnowledgeGraph::Builder::add_entity(std::string_view id, std::string_view label,
                                              bool is_company) {
  if (id.empty()) throw Error(ErrorKind::kInvalidArgument, "entity id must be non-empty");
  auto [it, inserted] =
      g_.by_id_.try_emplace(std::string(id), static_cast<NodeIndex>(g_.entities_.size()));
  if (inserted) {
    g_.entities_.push_back({std::string(id), std::string(label), is_company});
  } else {
    Entity& e = g_.entities_[it->second];
    if (e.label.empty()) e.label = std::string(label);
    e.is_company = e.is_company || is_company;
  }
  return it->second;
}

void KnowledgeGraph::Builder::add_edge(std::string_view subject, std::string_view relation,
                                       std::string_view object) {
  if (relation.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "relation id must be non-empty");
  }
  const NodeIndex s = add_entity(subject);
  const NodeIndex o = add_entity(object);
  auto [it, inserted] = relation_index_.try_emplace(
      std::string(relation), static_cast<std::uint32_t>(g_.relations_.size()));
  if (inserted) g_.relations_.emplace_back(relation);
  g_.edges_.push_back({s, it->second, o});
}

KnowledgeGraph KnowledgeGraph::Builder::build() && {
  g_.index_adjacency();
  return std::move(g_);
}

// --- Edge-list I/O ---------------------------------------------------------

KnowledgeGraph read_edge_list(std::istream& in, std::string_view source_name) {
  KnowledgeGraph::Builder builder;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim_cr(raw);
    if (is_blank(line) || line.front() == '#') continue;
    std::string_view fields[3];
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      const std::string_view field = line.substr(start, tab - start);
      if (count < 3) fields[count] = field;
      ++count;
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (count != 3 || fields[0].empty() || fields[1].empty() || fields[2].empty()) {
      std::ostringstream msg;
      msg << source_name << ":" << line_no
          << ": expected 3 non-empty tab-separated fields, got " << count;
      throw Error(ErrorKind::kParse, msg.str());
    }
    builder.add_edge(fields[0], fields[1], fields[2]);
  }
  if (in.bad()) throw Error(ErrorKind::kIo, "read failed: " + std::string(source_name));
  return std::move(builder).build();
}

KnowledgeGraph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open edge list: " + path.string());
  return read_edge_list(in, path.string());
}

void write_edge_list(const KnowledgeGraph& g, std::ostream& out) {
  for (const TypedEdge& e : g.edges()) {
    out << g.entity(e.subject).id << '\t' << g.relation(e.relation) << '\t'
        << g.entity(e.object).id << '\n';
  }
}

// --- Distances -------------------------------------------------------------

std::vector<std::pair<NodeIndex, int>> bounded_bfs(const KnowledgeGraph& g,
                                                   NodeIndex source, int max_depth) {
  if (source >= g.entity_count()) {
    throw Error(ErrorKind::kNotFound, "bounded_bfs: source out of range");
  }
  if (max_depth < 0) {
    throw Error(ErrorKind::kInvalidArgument, "bounded_bfs: max_depth must be >= 0");
  }
  std::vector<int> dist(g.entity_count(), -1);
  std::vector<NodeIndex> touched;
  bfs_into(g, source, max_depth, dist, touched);
  std::vector<std::pair<NodeIndex, int>> out;
  out.reserve(touched.size());
  for (NodeIndex v : touched) out.emplace_back(v, dist[v]);
  return out;
}

std::map<std::string, int> bounded_bfs(const KnowledgeGraph& g, std::string_view source,
                                       int max_depth) {
  std::map<std::string, int> out;
  for (auto [v, d] : bounded_bfs(g, g.require(source), max_depth)) {
    out.emplace(g.entity(v).id, d);
  }
  return out;
}

KnowledgeGraph extract_subgraph(const KnowledgeGraph& g, std::span<const std::string> seeds,
                                const std::optional<std::set<std::string>>& relation_filter) {
  if (seeds.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "extract_subgraph: at least one seed required");
  }
  std::vector<char> keep(g.entity_count(), 0);
  std::vector<int> dist(g.entity_count(), -1);
  std::vector<NodeIndex> touched;
  std::vector<NodeIndex> seed_idx;
  for (const std::string& s : seeds) seed_idx.push_back(g.require(s));
  for (NodeIndex s : seed_idx) {
    bfs_into(g, s, 2, dist, touched);
    for (NodeIndex v : touched) {
      keep[v] = 1;
      dist[v] = -1;
    }
  }
  std::vector<char> seed_flag(g.entity_count(), 0);
  for (NodeIndex s : seed_idx) seed_flag[s] = 1;

  KnowledgeGraph::Builder b;
  // Entities first, in source order, so isolated seeds survive.
  for (NodeIndex v = 0; v < g.entity_count(); ++v) {
    if (keep[v]) {
      const Entity& e = g.entity(v);
      b.add_entity(e.id, e.label, e.is_company || seed_flag[v]);
    }
  }
  for (const TypedEdge& e : g.edges()) {
    if (!keep[e.subject] || !keep[e.object]) continue;
    const std::string& rel = g.relation(e.relation);
    if (relation_filter && !relation_filter->contains(rel)) continue;
    b.add_edge(g.entity(e.subject).id, rel, g.entity(e.object).id);
  }
  return std::move(b).build();
}

// --- Summary graph ---------------------------------------------------------

SummaryGraph::SummaryGraph(std::vector<std::string> nodes,
                           std::vector<std::pair<std::string, std::string>> edges) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  nodes_ = std::move(nodes);
  adjacency_.resize(nodes_.size());
  for (const auto& [a, b] : edges) {
    NodeIndex ia = require(a);
    NodeIndex ib = require(b);
    if (ia == ib) {
      throw Error(ErrorKind::kInvalidArgument, "summary graph: self pair " + a);
    }
    if (ia > ib) std::swap(ia, ib);
    edges_.emplace_back(ia, ib);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (auto [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& l : adjacency_) std::sort(l.begin(), l.end());
}

std::optional<NodeIndex> SummaryGraph::find(std::string_view id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end() || *it != id) return std::nullopt;
  return static_cast<NodeIndex>(it - nodes_.begin());
}

NodeIndex SummaryGraph::require(std::string_view id) const {
  auto idx = find(id);
  if (!idx) throw Error(ErrorKind::kNotFound, "unknown summary node: " + std::string(id));
  return *idx;
}

bool SummaryGraph::has_edge(std::string_view a, std::string_view b) const {
  auto ia = find(a);
  auto ib = find(b);
  if (!ia || !ib || *ia == *ib) return false;
  if (*ia > *ib) std::swap(ia, ib);
  return std::binary_search(edges_.begin(), edges_.end(), std::pair{*ia, *ib});
}

SummaryGraph build_summary_graph(const KnowledgeGraph& g,
                                 std::span<const std::string> companies,
                                 int step_threshold) {
  if (step_threshold < 1) {
    throw Error(ErrorKind::kInvalidArgument, "build_summary_graph: step_threshold must be >= 1");
  }
  std::vector<NodeIndex> idx;
  idx.reserve(companies.size());
  for (const std::string& c : companies) idx.push_back(g.require(c));
  std::vector<char> is_member(g.entity_count(), 0);
  for (NodeIndex i : idx) is_member[i] = 1;

  std::vector<int> dist(g.entity_count(), -1);
  std::vector<NodeIndex> touched;
  std::vector<std::pair<std::string, std::string>> edges;
  for (NodeIndex s : idx) {
    bfs_into(g, s, step_threshold, dist, touched);
    for (NodeIndex v : touched) {
      if (v != s && is_member[v] && g.entity(s).id < g.entity(v).id) {
        edges.emplace_back(g.entity(s).id, g.entity(v).id);
      }
      dist[v] = -1;
    }
  }
  return SummaryGraph(std::vector<std::string>(companies.begin(), companies.end()),
                      std::move(edges));
}

std::map<int, int> degree_histogram(const SummaryGraph& sg) {
  std::map<int, int> h;
  for (NodeIndex i = 0; i < sg.node_count(); ++i) {
    ++h[static_cast<int>(sg.neighbors(i).size())];
  }
  return h;
}

std::map<int, int> degree_histogram(const KnowledgeGraph& g) {
  std::map<int, int> h;
  for (NodeIndex i = 0; i < g.entity_count(); ++i) {
    ++h[static_cast<int>(g.neighbors(i).size())];
  }
  return h;
}

std::vector<double> pair_reachability(const KnowledgeGraph& g,
                                      std::span<const std::string> companies,
                                      int max_depth) {
  if (max_depth < 1) {
    throw Error(ErrorKind::kInvalidArgument, "pair_reachability: max_depth must be >= 1");
  }
  std::vector<NodeIndex> idx;
  for (const std::string& c : companies) idx.push_back(g.require(c));
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  std::vector<char> is_member(g.entity_count(), 0);
  for (NodeIndex i : idx) is_member[i] = 1;

  std::vector<std::size_t> within(static_cast<std::size_t>(max_depth) + 1, 0);
  std::vector<int> dist(g.entity_count(), -1);
  std::vector<NodeIndex> touched;
  for (NodeIndex s : idx) {
    bfs_into(g, s, max_depth, dist, touched);
    for (NodeIndex v : touched) {
      if (v > s && is_member[v]) ++within[static_cast<std::size_t>(dist[v])];
      dist[v] = -1;
    }
  }
  const double pairs = static_cast<double>(idx.size()) * (idx.size() - 1) / 2.0;
  std::vector<double> out;
  std::size_t cumulative = 0;
  for (int d = 1; d <= max_depth; ++d) {
    cumulative += within[static_cast<std::size_t>(d)];
    out.push_back(pairs > 0 ? static_cast<double>(cumulative) / pairs : 0.0);
  }
  return out;
}

void write_summary_tsv(const SummaryGraph& sg, std::ostream& out) {
  for (const std::string& n : sg.nodes()) out << "# node\t" << n << '\n';
  for (auto [a, b] : sg.edges()) out << sg.nodes()[a] << '\t' << sg.nodes()[b] << '\n';
}

SummaryGraph read_summary_tsv(std::istream& in, std::string_view source_name) {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  std::string raw;
  std::size_t line_no = 0;
  constexpr std::string_view kNodePrefix = "# node\t";
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim_cr(raw);
    if (line.starts_with(kNodePrefix)) {
      nodes.emplace_back(line.substr(kNodePrefix.size()));
      continue;
    }
    if (is_blank(line) || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos ||
        tab == 0 || tab + 1 == line.size()) {
      std::ostringstream msg;
      msg << source_name << ":" << line_no << ": expected companyA<TAB>companyB";
      throw Error(ErrorKind::kParse, msg.str());
    }
    std::string a(line.substr(0, tab));
    std::string b(line.substr(tab + 1));
    nodes.push_back(a);
    nodes.push_back(b);
    edges.emplace_back(std::move(a), std::move(b));
  }
  return SummaryGraph(std::move(nodes), std::move(edges));
}

void write_degree_csv(const std::map<int, int>& histogram, std::ostream& out) {
  out << "degree,count\n";
  for (auto [degree, count] : histogram) out << degree << ',' << count << '\n';
}

}  // namespace sdg::graph
