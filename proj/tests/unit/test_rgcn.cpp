// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "sdg/error.hpp"
#include "sdg/models/rgcn.hpp"
#include "sdg/rng.hpp"
#include "support/gradcheck.hpp"

using namespace sdg;
using namespace sdg::models;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, sdg::Rng& rng) {
  Matrix m(r, c);
  for (double& v : m.values()) v = rng.uniform(-1.0, 1.0);
  return m;
}

CsrMatrix dense_to_csr(const Matrix& m) {
  std::vector<CsrMatrix::Triplet> t;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m(r, c) != 0.0) t.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), m(r, c)});
    }
  }
  return CsrMatrix::from_triplets(m.rows(), m.cols(), std::move(t));
}

// Companies c0..c2, entities e0..e2, two relations.
graph::KnowledgeGraph small_kg(bool one_relation) {
  graph::KnowledgeGraph::Builder b;
  b.add_entity("c0", "C0", true);
  b.add_entity("e0");
  b.add_entity("c1", "C1", true);
  b.add_entity("e1");
  b.add_entity("c2", "C2", true);
  b.add_entity("e2");
  b.add_entity("lonely", "Lonely", true);
  const std::string r1 = "owns";
  const std::string r2 = one_relation ? "owns" : "supplies";
  b.add_edge("c0", r1, "e0");
  b.add_edge("e0", r1, "c1");
  b.add_edge("c1", r2, "e1");
  b.add_edge("e1", r2, "c2");
  b.add_edge("c2", r1, "e2");
  b.add_edge("e2", r2, "c0");
  b.add_edge("c0", r1, "e0");  // parallel edge
  b.add_edge("e1", r1, "e1");  // self-loop
  return std::move(b).build();
}

const std::vector<std::string> kCompanies = {"c0", "c1", "c2", "lonely"};

Matrix dense_forward_one_relation(const RelationalGraph& g, const Matrix& x, const RgcnParams& p) {
  const std::size_t n = g.node_count();
  Matrix a(n, n);
  for (auto [i, j] : g.links[0]) a(i, j) = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double deg = 0;
    for (std::size_t j = 0; j < n; ++j) deg += a(i, j);
    for (std::size_t j = 0; j < n && deg > 0; ++j) a(i, j) /= deg;
  }
  Matrix h0(n, x.cols());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < x.cols(); ++c) {
      h0(i, c) = i < g.company_count ? x(i, c) : p.embeddings(i - g.company_count, c);
    }
  }
  Matrix h1 = matmul(h0, p.w1[0]);
  add_inplace(h1, matmul(a, matmul(h0, p.w1[1])));
  for (double& v : h1.values()) v = std::max(v, 0.0);
  Matrix logits = matmul(h1, p.w2[0]);
  add_inplace(logits, matmul(a, matmul(h1, p.w2[1])));
  return softmax_rows(logits);
}

}  // namespace

TEST_CASE("relational graph layout") {
  const auto kg = small_kg(false);
  const RelationalGraph g = build_relational_graph(kg, kCompanies, 1);
  CHECK(g.node_ids == std::vector<std::string>{"c0", "c1", "c2", "lonely", "e0", "e1", "e2"});
  CHECK(g.company_count == 4);
  CHECK(g.other_count() == 3);
  CHECK(g.relations == std::vector<std::string>{"owns", "supplies"});
  // owns: c0-e0, e0-c1, c2-e2 (parallel edge and self-loop dropped)
  CHECK(g.links[0].size() == 6);
  const Matrix a = g.adjacency[0].to_dense();
  CHECK(a(4, 0) == 0.5);  // e0 has two owns-neighbors
  CHECK(a(0, 4) == 1.0);
  CHECK(a(5, 5) == 0.0);
  CHECK(g.find("e2") == 6u);
  CHECK_FALSE(g.find("nope"));
  const std::vector<std::string> bad = {"ghost"};
  CHECK_THROWS_AS(build_relational_graph(kg, bad), sdg::Error);
}

TEST_CASE("rare relations merge into other") {
  const auto kg = small_kg(false);
  // owns occurs 5 times (with the parallel edge and self-loop), supplies 3.
  const RelationalGraph g = build_relational_graph(kg, kCompanies, 4);
  CHECK(g.relations == std::vector<std::string>{"owns", "other"});
  const RelationalGraph all_other = build_relational_graph(kg, kCompanies, 100);
  CHECK(all_other.relations == std::vector<std::string>{"other"});
  CHECK(all_other.links[0].size() == 12);
}

TEST_CASE("one relation matches a dense row-normalized formula") {
  const auto kg = small_kg(true);
  const RelationalGraph g = build_relational_graph(kg, kCompanies, 1);
  REQUIRE(g.relations.size() == 1);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    sdg::Rng rng(seed);
    const Matrix xd = random_matrix(4, 5, rng);
    RgcnConfig cfg;
    cfg.hidden = 6;
    cfg.seed = seed;
    cfg.embedding_scale = 0.5;
    const RgcnParams p = init_rgcn_params(g, 5, cfg);
    const Matrix got = rgcn_forward(g, dense_to_csr(xd), p).probs;
    const Matrix want = dense_forward_one_relation(g, xd, p);
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got.values()[i] - want.values()[i]) <= 1e-9);
  }
}

TEST_CASE("a node without neighbors only sees its own row") {
  const auto kg = small_kg(false);
  const RelationalGraph g = build_relational_graph(kg, kCompanies, 1);
  sdg::Rng rng(4);
  const Matrix xd = random_matrix(4, 3, rng);
  RgcnConfig cfg;
  cfg.hidden = 4;
  const RgcnParams p = init_rgcn_params(g, 3, cfg);
  const Matrix probs = rgcn_forward(g, dense_to_csr(xd), p).probs;
  Matrix h(1, 3);
  for (std::size_t c = 0; c < 3; ++c) h(0, c) = xd(3, c);
  Matrix h1 = matmul(h, p.w1[0]);
  for (double& v : h1.values()) v = std::max(v, 0.0);
  const Matrix want = softmax_rows(matmul(h1, p.w2[0]));
  for (std::size_t c = 0; c < kNumClasses; ++c) CHECK(probs(3, c) == doctest::Approx(want(0, c)).epsilon(1e-12));
}

TEST_CASE("analytic gradient matches central differences") {
  const auto kg = small_kg(false);
  const RelationalGraph g = build_relational_graph(kg, kCompanies, 1);
  const std::vector<int> labels = {1, -1, 5, 3, -1, -1, -1};
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    sdg::Rng rng(seed + 100);
    const CsrMatrix x = dense_to_csr(random_matrix(4, 3, rng));
    RgcnConfig cfg;
    cfg.hidden = 4;
    cfg.seed = seed;
    cfg.embedding_scale = 0.5;
    RgcnParams p = init_rgcn_params(g, 3, cfg);
    const RgcnGrads gr = rgcn_backward(g, x, p, rgcn_forward(g, x, p), labels);
    auto loss = [&] { return masked_cross_entropy(rgcn_forward(g, x, p).probs, labels); };
    CHECK(sdg::testing::max_relative_error(p.embeddings, gr.embeddings, loss) <= 1e-4);
    for (std::size_t k = 0; k < p.w1.size(); ++k) {
      CHECK(sdg::testing::max_relative_error(p.w1[k], gr.w1[k], loss) <= 1e-4);
      CHECK(sdg::testing::max_relative_error(p.w2[k], gr.w2[k], loss) <= 1e-4);
    }
  }
}

TEST_CASE("training reduces the loss and round-trips through json") {
  const auto kg = small_kg(false);
  const RelationalGraph g = build_relational_graph(kg, kCompanies, 1);
  sdg::Rng rng(8);
  const CsrMatrix x = dense_to_csr(random_matrix(4, 3, rng));
  const std::vector<int> labels = {0, 6, -1, 3};
  RgcnConfig cfg;
  cfg.epochs = 200;
  cfg.seed = 2;
  RgcnModel m = train_rgcn(g, x, labels, cfg);
  CHECK(m.loss_history.back() < m.loss_history.front());
  const Matrix probs = predict_rgcn(m, x);
  CHECK(probs.rows() == 4);
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    double s = 0;
    for (double v : probs.row(r)) s += v;
    CHECK(std::abs(s - 1.0) <= 1e-9);
  }
  m.vocab_hash = 99;
  const RgcnModel back = rgcn_from_json(nlohmann::json::parse(to_json(m).dump()));
  CHECK(back.graph.node_ids == m.graph.node_ids);
  CHECK(back.graph.links == m.graph.links);
  CHECK(back.vocab_hash == 99);
  CHECK(predict_rgcn(back, x) == probs);

  const RgcnModel again = train_rgcn(g, x, labels, cfg);
  CHECK(again.loss_history == m.loss_history);

  const std::vector<int> none = {-1, -1, -1, -1};
  CHECK_THROWS_AS(train_rgcn(g, x, none, cfg), sdg::Error);
}
