// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "sdg/error.hpp"
#include "sdg/explain.hpp"
#include "sdg/rng.hpp"
#include "sdg/synthetic.hpp"

using namespace sdg;
using namespace sdg::explain;
using features::SparseRow;

namespace {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

// Class 6 carries sigmoid(1 + sum of coefficients of present terms); the
// remaining mass is spread evenly.
PredictFn logistic(std::vector<double> coef) {
  return [coef](const SparseRow& row) {
    double z = 1.0;
    for (auto [c, v] : row) {
      if (v > 0) z += coef[c];
    }
    ProbabilityVector p{};
    p[6] = sigmoid(z);
    for (int k = 0; k < 6; ++k) p[k] = (1.0 - p[6]) / 6.0;
    return p;
  };
}

features::Vocabulary vocab_of(std::vector<std::string> terms) {
  return features::Vocabulary(terms, std::vector<int>(terms.size(), 1));
}

SparseRow full_row(std::size_t n) {
  SparseRow r;
  for (std::size_t c = 0; c < n; ++c) r[c] = 1 + static_cast<int>(c % 3);
  return r;
}

ProbabilityVector row_of(const Matrix& m, std::size_t r) {
  ProbabilityVector p{};
  for (int c = 0; c < kNumClasses; ++c) p[c] = m(r, static_cast<std::size_t>(c));
  return p;
}

struct TrainedStars {
  synthetic::PlantedStars planted;
  models::GcnModel model;
};

TrainedStars train_stars(std::uint64_t seed, int epochs = 400) {
  TrainedStars t;
  t.planted = synthetic::informative_neighbor_graph(12, 5, seed);
  models::GcnConfig cfg;
  cfg.epochs = epochs;
  cfg.seed = seed;
  t.model = models::train_gcn(t.planted.graph.sg, t.planted.graph.x, t.planted.labels, cfg);
  return t;
}

}  // namespace

TEST_CASE("constant model gets zero attributions") {
  const auto vocab = vocab_of({"a", "b", "c", "d"});
  const PredictFn constant = [](const SparseRow&) {
    ProbabilityVector p{};
    p.fill(1.0 / 7);
    return p;
  };
  const auto att = lime_explain(constant, full_row(4), vocab);
  REQUIRE(att.terms.size() == 4);
  for (const auto& t : att.terms) CHECK(std::abs(t.weight) <= 1e-9);
}

TEST_CASE("planted logistic model: signs and a negligible neutral term") {
  const auto vocab = vocab_of({"coal", "the", "wind"});
  const auto fn = logistic({-2.0, 0.0, 2.0});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    LimeConfig cfg;
    cfg.seed = seed;
    const auto att = lime_explain(fn, full_row(3), vocab, cfg);
    CHECK(att.predicted_class == 6);
    const double coal = att.weight_of(0), the = att.weight_of(1), wind = att.weight_of(2);
    CHECK(wind > 0);
    CHECK(coal < 0);
    CHECK(std::abs(the) < std::min(std::abs(wind), std::abs(coal)) / 10);
    CHECK(att.weighted_r2 >= 0.7);
    CHECK(att.terms[2].term == "the");
  }
}

TEST_CASE("absent terms are never attributed") {
  const auto vocab = vocab_of({"a", "b", "c", "d", "e"});
  const auto fn = logistic({1, -1, 0.5, 2, -2});
  const SparseRow x = {{1, 2}, {3, 1}};
  const auto att = lime_explain(fn, x, vocab);
  CHECK(att.weight_of(0) == 0.0);
  CHECK(att.weight_of(2) == 0.0);
  CHECK(att.weight_of(4) == 0.0);
  CHECK(att.coefficients.size() == 2);
  std::set<std::string> terms;
  for (const auto& t : att.terms) terms.insert(t.term);
  CHECK(terms == std::set<std::string>{"b", "d"});
}

TEST_CASE("top-m keeps the largest weights in order") {
  const std::vector<double> coef = {0.1, -1.5, 0.7, 2.5, -0.3, 1.1, 0.0, -0.9};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < coef.size(); ++i) names.push_back("t" + std::to_string(i));
  const auto vocab = vocab_of(names);
  LimeConfig cfg;
  cfg.top_m = 3;
  const auto att = lime_explain(logistic(coef), full_row(coef.size()), vocab, cfg);
  REQUIRE(att.terms.size() == 3);
  for (std::size_t k = 1; k < att.terms.size(); ++k) {
    CHECK(std::abs(att.terms[k - 1].weight) >= std::abs(att.terms[k].weight));
  }
  CHECK(att.terms[0].term == "t3");
}

TEST_CASE("lime is deterministic per seed and across threads") {
  const auto vocab = vocab_of({"a", "b", "c", "d"});
  const auto fn = logistic({1, -1, 0.5, 2});
  LimeConfig cfg;
  cfg.seed = 4;
  const auto a = lime_explain(fn, full_row(4), vocab, cfg);
  const auto b = lime_explain(fn, full_row(4), vocab, cfg);
  CHECK(a.coefficients == b.coefficients);
  cfg.seed = 5;
  CHECK(lime_explain(fn, full_row(4), vocab, cfg).coefficients != a.coefficients);

  std::vector<SparseRow> rows = {full_row(4), {{0, 1}, {2, 1}}, {{1, 3}}, {{3, 1}, {1, 1}}};
  const auto one = lime_explain_all(fn, rows, vocab, cfg, 1);
  const auto many = lime_explain_all(fn, rows, vocab, cfg, 4);
  REQUIRE(one.size() == 4);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(one[i].coefficients == many[i].coefficients);
}

TEST_CASE("lime errors") {
  const auto vocab = vocab_of({"a", "b"});
  const auto fn = logistic({1, -1});
  CHECK_THROWS_AS(lime_explain(fn, SparseRow{}, vocab), sdg::Error);
  LimeConfig few;
  few.n_samples = 5;
  CHECK_THROWS_AS(lime_explain(fn, full_row(2), vocab, few), sdg::Error);
  const PredictFn broken = [](const SparseRow&) -> ProbabilityVector { throw std::runtime_error("boom"); };
  CHECK_THROWS_AS(lime_explain(broken, full_row(2), vocab), sdg::Error);
  const PredictFn nan = [](const SparseRow&) {
    ProbabilityVector p{};
    p[0] = std::nan("");
    return p;
  };
  try {
    lime_explain(nan, full_row(2), vocab);
    FAIL("expected kNumeric");
  } catch (const sdg::Error& e) {
    CHECK(e.kind() == sdg::ErrorKind::kNumeric);
  }
}

TEST_CASE("isolated node has no edges and full fidelity") {
  const graph::SummaryGraph sg({"a", "b", "c", "z"}, {{"a", "b"}, {"b", "c"}});
  const CsrMatrix x = CsrMatrix::from_triplets(4, 2, {{0, 0, 1}, {1, 1, 1}, {2, 0, 2}, {3, 1, 1}});
  models::GcnConfig cfg;
  cfg.epochs = 30;
  const std::vector<int> labels = {1, 5, 1, 5};
  const auto m = models::train_gcn(sg, x, labels, cfg);
  const auto ex = gnn_explain(m, x, "z");
  CHECK(ex.edges.empty());
  const auto p = row_of(models::predict_gcn_all(m, x), 3);
  CHECK(ex.predicted_class == argmax(p));
  CHECK(ex.fidelity == p[static_cast<std::size_t>(argmax(p))]);
  CHECK_THROWS_AS(gnn_explain(m, x, "nobody"), sdg::Error);
}

TEST_CASE("all-ones mask reproduces the model exactly; all-zero mask leaves the self-loops") {
  const auto t = train_stars(3, 100);
  const auto& x = t.planted.graph.x;
  const Matrix full = models::predict_gcn_all(t.model, x);
  for (std::size_t s = 0; s < t.planted.centers.size(); s += 3) {
    const std::string& focal = t.planted.centers[s];
    const std::size_t f = *t.model.find(focal);
    const auto edges = computation_edges(t.model, focal);
    const std::vector<double> ones(edges.size(), 1.0);
    CHECK(masked_probabilities(t.model, x, focal, ones) == row_of(full, f));

    const std::vector<double> zeros(edges.size(), 0.0);
    const auto p0 = masked_probabilities(t.model, x, focal, zeros);
    const double self = t.model.a_hat.to_dense()(f, f);
    Matrix xf(1, x.cols);
    for (std::size_t p = x.row_ptr[f]; p < x.row_ptr[f + 1]; ++p) xf(0, x.col[p]) = x.val[p];
    Matrix h = matmul(xf, t.model.params.w1);
    for (double& v : h.values()) v = std::max(v * self, 0.0);
    Matrix logits = matmul(h, t.model.params.w2);
    for (double& v : logits.values()) v *= self;
    const Matrix want = softmax_rows(logits);
    for (int c = 0; c < kNumClasses; ++c) CHECK(std::abs(p0[c] - want(0, static_cast<std::size_t>(c))) <= 1e-9);
  }
}

TEST_CASE("edge explanations stay inside the 2-hop subgraph") {
  const auto t = train_stars(5, 300);
  const auto& sg = t.planted.graph.sg;
  for (std::size_t s = 0; s < 4; ++s) {
    const std::string& focal = t.planted.centers[s];
    GnnExplainConfig cfg;
    cfg.seed = s;
    const auto ex = gnn_explain(t.model, t.planted.graph.x, focal, cfg);
    std::set<std::string> near = {focal};
    for (auto n1 : sg.neighbors(sg.require(focal))) {
      near.insert(std::string(sg.nodes()[n1]));
      for (auto n2 : sg.neighbors(n1)) near.insert(std::string(sg.nodes()[n2]));
    }
    CHECK(!ex.edges.empty());
    for (const auto& e : ex.all_edges) {
      CHECK(near.count(e.a) == 1);
      CHECK(near.count(e.b) == 1);
      CHECK(sg.has_edge(e.a, e.b));
      CHECK(e.weight >= 0.0);
      CHECK(e.weight <= 1.0);
    }
    for (std::size_t k = 1; k < ex.all_edges.size(); ++k) CHECK(ex.all_edges[k - 1].weight >= ex.all_edges[k].weight);
    CHECK(ex.fidelity >= 0.0);
    CHECK(ex.fidelity <= 1.0);
    const auto again = gnn_explain(t.model, t.planted.graph.x, focal, cfg);
    CHECK(again.all_edges.size() == ex.all_edges.size());
    CHECK(again.fidelity == ex.fidelity);
  }
}

TEST_CASE("the informative neighbor ranks high") {
  int hits = 0, trials = 0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto t = train_stars(seed);
    for (std::size_t s = 0; s < 3; ++s) {
      GnnExplainConfig cfg;
      cfg.seed = seed * 10 + s;
      const auto ex = gnn_explain(t.model, t.planted.graph.x, t.planted.centers[s], cfg);
      ++trials;
      for (std::size_t k = 0; k < std::min<std::size_t>(3, ex.all_edges.size()); ++k) {
        const auto& e = ex.all_edges[k];
        if ((e.a == t.planted.centers[s] && e.b == t.planted.informative[s]) ||
            (e.b == t.planted.centers[s] && e.a == t.planted.informative[s])) {
          ++hits;
          break;
        }
      }
    }
  }
  CHECK(hits >= trials * 8 / 10);
}

TEST_CASE("report lists terms in weight order") {
  TermAttribution terms;
  terms.company_id = "acme";
  terms.sdg = 7;
  terms.predicted_class = 6;
  terms.terms = {{"wind", 0, 0.31}, {"energy", 1, 0.22}, {"coal", 2, -0.05}};
  ReportEntry r;
  r.company_id = "acme";
  r.company_name = "Acme Wind AG";
  r.sdg = 7;
  r.model = "brf";
  r.predicted_class = 6;
  r.probs = {0.01, 0.01, 0.02, 0.06, 0.1, 0.2, 0.6};
  r.terms = terms;
  relevance::Evidence e1;
  e1.company_id = "acme";
  e1.sdg = 7;
  e1.sentence = "We operate wind farms across Europe.";
  relevance::Evidence e2 = e1;
  e2.sentence = "Our headquarters moved last year.";
  const std::vector<relevance::Evidence> all = {e1, e2};
  r.evidence = supporting_evidence(terms, all);
  REQUIRE(r.evidence.size() == 1);

  const std::vector<ReportEntry> entries = {r};
  const auto j = report_json(entries);
  const auto& entry = j["entries"][0];
  CHECK(entry["predicted_score"] == 3);
  CHECK(entry["terms"][0]["term"] == "wind");
  CHECK(entry["terms"][1]["term"] == "energy");
  CHECK(entry["evidence"][0]["terms"] == nlohmann::json::array({"wind"}));
  const std::string md = report_markdown(entries);
  const auto wind = md.find("- wind");
  const auto energy = md.find("- energy");
  const auto coal = md.find("- coal");
  REQUIRE(wind != std::string::npos);
  CHECK(wind < energy);
  CHECK(energy < coal);
  CHECK(md.find("Predicted score +3") != std::string::npos);
}

TEST_CASE("empty explanation is stated") {
  ReportEntry r;
  r.company_id = "quiet";
  r.sdg = 2;
  r.model = "gcn";
  r.probs.fill(1.0 / 7);
  const std::vector<ReportEntry> entries = {r};
  CHECK(report_markdown(entries).find("no explanation available") != std::string::npos);
  CHECK(report_json(entries)["entries"][0]["explanation_available"] == false);
}

TEST_CASE("sample report for schema validation") {
  TermAttribution terms;
  terms.terms = {{"solar", 4, 0.4}};
  EdgeExplanation edges;
  edges.edges = {{"acme", "sgl", 0.8}};
  edges.fidelity = 0.7;
  ReportEntry a;
  a.company_id = "acme";
  a.company_name = "Acme";
  a.sdg = 7;
  a.model = "gcn";
  a.predicted_class = 5;
  a.probs = {0.0, 0.0, 0.1, 0.1, 0.1, 0.6, 0.1};
  a.terms = terms;
  a.edges = edges;
  relevance::Evidence ev;
  ev.sentence = "Solar parks supply the grid.";
  ev.score = 0.5;
  ev.verdict.label = relevance::Entailment::kEntailed;
  a.evidence = {ev};
  ReportEntry b;
  b.company_id = "quiet";
  b.sdg = 1;
  b.model = "brf";
  b.probs.fill(1.0 / 7);
  const std::vector<ReportEntry> entries = {a, b};
  const NameLookup names = {{"sgl", "SGL Carbon SE"}};
  const auto j = report_json(entries, names);
  CHECK(j["entries"][0]["edges"][0]["target_name"] == "SGL Carbon SE");
  std::ofstream(SDG_REPORT_SAMPLE) << j.dump(2) << "\n";
}
