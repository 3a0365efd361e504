// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sdg/error.hpp"
#include "sdg/graph_store.hpp"
#include "support/oracles.hpp"

using namespace sdg::graph;
using sdg::testing::EdgeTriple;

namespace {

KnowledgeGraph graph_from(const std::string& tsv) {
  std::istringstream in(tsv);
  return read_edge_list(in);
}

KnowledgeGraph graph_from(const std::vector<EdgeTriple>& edges) {
  std::ostringstream out;
  for (const auto& e : edges) out << e.subject << '\t' << e.relation << '\t' << e.object << '\n';
  return graph_from(out.str());
}

std::vector<std::string> ids_of(const KnowledgeGraph& g) {
  std::vector<std::string> out;
  for (const auto& e : g.entities()) out.push_back(e.id);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("load_edge_list reads entities, edges and relation types") {
  auto g = graph_from("A\tr1\tB\nB\tr2\tC\n");
  CHECK(g.entity_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.relation_count() == 2);

  auto empty = graph_from("");
  CHECK(empty.entity_count() == 0);
  CHECK(empty.edge_count() == 0);

  auto commented = graph_from("# header\n\nA\tr\tB\r\nA\tr\tB\n");
  CHECK(commented.edge_count() == 2);  // multi-edges preserved
  CHECK(commented.neighbors(0).size() == 1);
}

TEST_CASE("load_edge_list reports the malformed line") {
  try {
    graph_from("A\tr\tB\nA\tr\n");
    FAIL("expected parse error");
  } catch (const sdg::Error& e) {
    CHECK(e.kind() == sdg::ErrorKind::kParse);
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  CHECK_THROWS_AS(graph_from("A\tr\tB\tD\n"), sdg::Error);
  CHECK_THROWS_AS(graph_from("A\t\tB\n"), sdg::Error);
  CHECK_THROWS_AS(load_edge_list("/nonexistent/edges.tsv"), sdg::Error);
}

TEST_CASE("edge list round-trips the edge multiset") {
  sdg::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto edges = sdg::testing::random_typed_edges(rng, 15, 0.3);
    auto g = graph_from(edges);
    std::ostringstream out;
    write_edge_list(g, out);
    auto g2 = graph_from(out.str());
    std::vector<std::string> a, b;
    for (const auto& e : edges) a.push_back(e.subject + "|" + e.relation + "|" + e.object);
    std::istringstream lines(out.str());
    for (std::string l; std::getline(lines, l);) {
      std::replace(l.begin(), l.end(), '\t', '|');
      b.push_back(l);
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
    CHECK(g2.edge_count() == g.edge_count());
  }
}

TEST_CASE("bounded_bfs small cases") {
  auto g = graph_from("A\tr\tB\nC\tr\tB\n");
  CHECK(bounded_bfs(g, "A", 1) == std::map<std::string, int>{{"A", 0}, {"B", 1}});
  CHECK(bounded_bfs(g, "A", 0) == std::map<std::string, int>{{"A", 0}});
  CHECK(bounded_bfs(g, "A", 5).at("C") == 2);  // direction ignored
  CHECK_THROWS_AS(bounded_bfs(g, "Z", 1), sdg::Error);
  CHECK_THROWS_AS(bounded_bfs(g, "A", -1), sdg::Error);
}

TEST_CASE("bounded_bfs matches Floyd-Warshall on random graphs") {
  sdg::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(49));
    auto edges = sdg::testing::random_typed_edges(rng, n, rng.uniform(0.05, 0.4));
    auto g = graph_from(edges);
    auto oracle = sdg::testing::floyd_warshall(n, edges);
    const int depth = static_cast<int>(rng.below(5));
    const int src = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    auto got = bounded_bfs(g, "n" + std::to_string(src), depth);
    std::map<std::string, int> want;
    for (int v = 0; v < n; ++v) {
      if (oracle[src][v] <= depth) want["n" + std::to_string(v)] = oracle[src][v];
    }
    CHECK(got == want);
  }
}

TEST_CASE("extract_subgraph boundary cases") {
  auto star = graph_from("c\tr\tl1\nc\tr\tl2\nl3\tr\tc\n");
  CHECK(extract_subgraph(star, std::vector<std::string>{"c"}).entity_count() == 4);

  auto path = graph_from("s1\tr\ta\na\tr\tb\nb\tr\tc\nc\tr\ts2\ns2\tr\tfar1\nfar1\tr\tfar2\nfar2\tr\tfar3\n");
  auto sub = extract_subgraph(path, std::vector<std::string>{"s1", "s2"});
  CHECK(ids_of(sub) == std::vector<std::string>{"a", "b", "c", "far1", "far2", "s1", "s2"});
  CHECK(bounded_bfs(sub, "s1", 4).at("s2") == 4);
  CHECK(sub.entity(*sub.find("s1")).is_company);

  auto filtered = extract_subgraph(path, std::vector<std::string>{"s1"},
                                   std::set<std::string>{"none"});
  CHECK(filtered.entity_count() == 3);  // nodes kept, edges filtered
  CHECK(filtered.edge_count() == 0);

  CHECK_THROWS_AS(extract_subgraph(path, std::vector<std::string>{"nope"}), sdg::Error);
  CHECK_THROWS_AS(extract_subgraph(path, std::vector<std::string>{}), sdg::Error);
}

TEST_CASE("extract_subgraph equals the oracle two-hop union and is monotone in seeds") {
  sdg::Rng rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(60));
    auto edges = sdg::testing::random_typed_edges(rng, n, rng.uniform(0.02, 0.2));
    auto g = graph_from(edges);
    auto oracle = sdg::testing::floyd_warshall(n, edges);
    std::vector<std::string> seeds;
    std::vector<int> seed_idx;
    const int k = 1 + static_cast<int>(rng.below(4));
    for (int i = 0; i < k; ++i) {
      const int s = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      seed_idx.push_back(s);
      seeds.push_back("n" + std::to_string(s));
    }
    std::vector<std::string> want;
    for (int v = 0; v < n; ++v) {
      int best = sdg::testing::kUnreachable;
      for (int s : seed_idx) best = std::min(best, oracle[s][v]);
      if (best <= 2) want.push_back("n" + std::to_string(v));
    }
    std::sort(want.begin(), want.end());
    auto sub = extract_subgraph(g, seeds);
    CHECK(ids_of(sub) == want);

    seeds.push_back("n" + std::to_string(rng.below(static_cast<std::uint64_t>(n))));
    auto bigger = ids_of(extract_subgraph(g, seeds));
    CHECK(std::includes(bigger.begin(), bigger.end(), want.begin(), want.end()));
  }
}

TEST_CASE("build_summary_graph threshold boundary") {
  auto two = graph_from("a\tr\tx\nx\tr\tb\n");
  std::vector<std::string> ab{"a", "b"};
  CHECK(build_summary_graph(two, ab).has_edge("a", "b"));
  CHECK(build_summary_graph(two, ab).has_edge("b", "a"));
  auto three = graph_from("a\tr\tx\nx\tr\ty\ny\tr\tb\n");
  CHECK(build_summary_graph(three, ab).edge_count() == 0);
  CHECK(build_summary_graph(three, ab, 3).edge_count() == 1);
  CHECK_THROWS_AS(build_summary_graph(three, ab, 0), sdg::Error);
  CHECK_THROWS_AS(build_summary_graph(three, std::vector<std::string>{"a", "q"}), sdg::Error);
}

TEST_CASE("build_summary_graph matches the oracle and is symmetric") {
  sdg::Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(49));
    auto edges = sdg::testing::random_typed_edges(rng, n, rng.uniform(0.05, 0.3));
    auto g = graph_from(edges);
    auto oracle = sdg::testing::floyd_warshall(n, edges);
    std::vector<std::string> companies;
    for (int v = 0; v < n; ++v) {
      if (rng.bernoulli(0.5)) companies.push_back("n" + std::to_string(v));
    }
    auto sg = build_summary_graph(g, companies);
    std::size_t expected_edges = 0;
    for (const auto& a : companies) {
      for (const auto& b : companies) {
        const int ia = std::stoi(a.substr(1)), ib = std::stoi(b.substr(1));
        const bool want = ia != ib && oracle[ia][ib] <= 2;
        CHECK(sg.has_edge(a, b) == want);
        CHECK(sg.has_edge(a, b) == sg.has_edge(b, a));
        if (want && ia < ib) ++expected_edges;
      }
    }
    CHECK(sg.edge_count() == expected_edges);
    CHECK(sg.edge_count() <= companies.size() * (companies.size() - (companies.empty() ? 0 : 1)) / 2);
  }
}

TEST_CASE("degree histogram") {
  SummaryGraph triangle({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}});
  CHECK(degree_histogram(triangle) == std::map<int, int>{{2, 3}});
  CHECK(degree_histogram(SummaryGraph{}).empty());
  SummaryGraph path({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  CHECK(degree_histogram(path) == std::map<int, int>{{1, 2}, {2, 1}});

  std::ostringstream csv;
  write_degree_csv(degree_histogram(path), csv);
  CHECK(csv.str() == "degree,count\n1,2\n2,1\n");
}

TEST_CASE("summary TSV round-trips including isolated nodes") {
  SummaryGraph sg({"c", "a", "b", "z"}, {{"b", "a"}, {"c", "b"}});
  std::ostringstream out;
  write_summary_tsv(sg, out);
  CHECK(out.str() == "# node\ta\n# node\tb\n# node\tc\n# node\tz\na\tb\nb\tc\n");
  std::istringstream in(out.str());
  auto back = read_summary_tsv(in);
  CHECK(back.node_count() == 4);
  CHECK(back.has_edge("a", "b"));
  CHECK(!back.has_edge("a", "c"));
  CHECK_THROWS_AS(SummaryGraph({"a"}, {{"a", "a"}}), sdg::Error);
}

TEST_CASE("pair reachability profile") {
  auto g = graph_from("a\tr\tb\nb\tr\tx\nx\tr\tc\n");
  auto p = pair_reachability(g, std::vector<std::string>{"a", "b", "c"}, 2);
  REQUIRE(p.size() == 2);
  CHECK(p[0] == doctest::Approx(1.0 / 3));  // a-b
  CHECK(p[1] == doctest::Approx(2.0 / 3));  // + b-c
}
