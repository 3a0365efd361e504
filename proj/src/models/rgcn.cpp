// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdg/models/rgcn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "json_matrix.hpp"
#include "sdg/error.hpp"
#include "sdg/rng.hpp"

namespace sdg::models {

namespace {

// Rows [begin, end) of m.
Matrix rows_of(const Matrix& m, std::size_t begin, std::size_t end) {
  Matrix out(end - begin, m.cols());
  std::copy(m.data() + begin * m.cols(), m.data() + end * m.cols(), out.data());
  return out;
}

// H0 W where H0 stacks the sparse company rows over the dense embeddings.
Matrix stacked_times(const CsrMatrix& x, const Matrix& e, const Matrix& w) {
  const Matrix top = spmm(x, w);
  const Matrix bottom = matmul(e, w);
  Matrix out(top.rows() + bottom.rows(), w.cols());
  std::copy(top.values().begin(), top.values().end(), out.data());
  std::copy(bottom.values().begin(), bottom.values().end(), out.data() + top.size());
  return out;
}

// H0^T M, split the same way.
Matrix stacked_t_times(const CsrMatrix& x_t, const Matrix& e, const Matrix& m, std::size_t companies) {
  Matrix out = spmm(x_t, rows_of(m, 0, companies));
  add_inplace(out, matmul_tn(e, rows_of(m, companies, m.rows())));
  return out;
}

Matrix relu(Matrix m) {
  for (double& v : m.values()) v = std::max(v, 0.0);
  return m;
}

RgcnGrads backward_with(const RelationalGraph& g, const CsrMatrix& x_t, const RgcnParams& p,
                        const RgcnForward& f, std::span<const int> labels) {
  const std::size_t nc = g.company_count;
  const std::size_t R = g.relations.size();
  RgcnGrads grads;
  grads.loss = masked_cross_entropy(f.probs, labels);
  const double n = static_cast<double>(std::count_if(labels.begin(), labels.end(), [](int c) { return c >= 0; }));

  Matrix d_logits(f.probs.rows(), f.probs.cols());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) continue;
    for (std::size_t c = 0; c < f.probs.cols(); ++c) {
      d_logits(i, c) = (f.probs(i, c) - (static_cast<int>(c) == labels[i] ? 1.0 : 0.0)) / n;
    }
  }

  grads.w2.push_back(matmul_tn(f.h1, d_logits));
  Matrix d_h1 = matmul_nt(d_logits, p.w2[0]);
  for (std::size_t r = 0; r < R; ++r) {
    const Matrix gr = spmm(g.adjacency_t[r], d_logits);
    grads.w2.push_back(matmul_tn(f.h1, gr));
    add_inplace(d_h1, matmul_nt(gr, p.w2[r + 1]));
  }
  for (std::size_t i = 0; i < d_h1.size(); ++i) {
    if (!(f.h1_pre.values()[i] > 0.0)) d_h1.values()[i] = 0.0;
  }

  grads.w1.push_back(stacked_t_times(x_t, p.embeddings, d_h1, nc));
  Matrix d_e = matmul_nt(rows_of(d_h1, nc, d_h1.rows()), p.w1[0]);
  for (std::size_t r = 0; r < R; ++r) {
    const Matrix q = spmm(g.adjacency_t[r], d_h1);
    grads.w1.push_back(stacked_t_times(x_t, p.embeddings, q, nc));
    add_inplace(d_e, matmul_nt(rows_of(q, nc, q.rows()), p.w1[r + 1]));
  }
  grads.embeddings = std::move(d_e);
  return grads;
}

bool all_finite(const RgcnGrads& g) {
  if (!std::isfinite(g.loss) || !g.embeddings.all_finite()) return false;
  for (const auto& m : g.w1) {
    if (!m.all_finite()) return false;
  }
  for (const auto& m : g.w2) {
    if (!m.all_finite()) return false;
  }
  return true;
}

}  // namespace

std::optional<std::size_t> RelationalGraph::find(std::string_view id) const {
  auto it = std::find(node_ids.begin(), node_ids.end(), id);
  if (it == node_ids.end()) return std::nullopt;
  return static_cast<std::size_t>(it - node_ids.begin());
}

void normalize_links(RelationalGraph& g) {
  const std::size_t n = g.node_count();
  g.adjacency.clear();
  g.adjacency_t.clear();
  for (const auto& pairs : g.links) {
    std::vector<int> degree(n, 0);
    for (auto [i, j] : pairs) ++degree[i];
    std::vector<CsrMatrix::Triplet> t;
    t.reserve(pairs.size());
    for (auto [i, j] : pairs) t.push_back({i, j, 1.0 / degree[i]});
    g.adjacency.push_back(CsrMatrix::from_triplets(n, n, std::move(t)));
    g.adjacency_t.push_back(g.adjacency.back().transposed());
  }
}

RelationalGraph build_relational_graph(const graph::KnowledgeGraph& kg,
                                       std::span<const std::string> company_entities, int min_relation_count) {
  RelationalGraph g;
  std::vector<std::uint32_t> node_of(kg.entity_count(), UINT32_MAX);
  for (const auto& id : company_entities) {
    const graph::NodeIndex e = kg.require(id);
    if (node_of[e] != UINT32_MAX) throw Error(ErrorKind::kInvalidArgument, "rgcn: duplicate company entity " + id);
    node_of[e] = static_cast<std::uint32_t>(g.node_ids.size());
    g.node_ids.push_back(id);
  }
  g.company_count = g.node_ids.size();
  for (graph::NodeIndex e = 0; e < kg.entity_count(); ++e) {
    if (node_of[e] == UINT32_MAX) {
      node_of[e] = static_cast<std::uint32_t>(g.node_ids.size());
      g.node_ids.push_back(kg.entity(e).id);
    }
  }

  std::vector<int> occurrences(kg.relation_count(), 0);
  for (const auto& e : kg.edges()) ++occurrences[e.relation];
  std::vector<int> slot(kg.relation_count(), -1);
  bool need_other = false;
  for (std::uint32_t r = 0; r < kg.relation_count(); ++r) {
    if (occurrences[r] >= min_relation_count) {
      slot[r] = static_cast<int>(g.relations.size());
      g.relations.push_back(kg.relation(r));
    } else {
      need_other = true;
    }
  }
  if (need_other) {
    const int other = static_cast<int>(g.relations.size());
    g.relations.push_back("other");
    for (int& s : slot) {
      if (s < 0) s = other;
    }
  }

  std::vector<std::set<std::pair<std::uint32_t, std::uint32_t>>> pairs(g.relations.size());
  for (const auto& e : kg.edges()) {
    if (e.subject == e.object) continue;
    const std::uint32_t a = node_of[e.subject];
    const std::uint32_t b = node_of[e.object];
    pairs[static_cast<std::size_t>(slot[e.relation])].insert({a, b});
    pairs[static_cast<std::size_t>(slot[e.relation])].insert({b, a});
  }
  for (auto& s : pairs) g.links.emplace_back(s.begin(), s.end());
  normalize_links(g);
  return g;
}

RgcnParams init_rgcn_params(const RelationalGraph& g, std::size_t input_dim, const RgcnConfig& config) {
  Rng rng(config.seed);
  auto glorot = [&](std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (double& v : m.values()) v = rng.uniform(-limit, limit);
    return m;
  };
  RgcnParams p;
  const auto hidden = static_cast<std::size_t>(config.hidden);
  for (std::size_t k = 0; k <= g.relations.size(); ++k) p.w1.push_back(glorot(input_dim, hidden));
  for (std::size_t k = 0; k <= g.relations.size(); ++k) p.w2.push_back(glorot(hidden, kNumClasses));
  p.embeddings = Matrix(g.other_count(), input_dim);
  for (double& v : p.embeddings.values()) v = rng.uniform(-config.embedding_scale, config.embedding_scale);
  return p;
}

RgcnForward rgcn_forward(const RelationalGraph& g, const CsrMatrix& x, const RgcnParams& p) {
  if (x.rows != g.company_count || p.embeddings.rows() != g.other_count() || x.cols != p.embeddings.cols() ||
      p.w1.size() != g.relations.size() + 1 || p.w2.size() != g.relations.size() + 1) {
    throw Error(ErrorKind::kInvalidArgument, "rgcn: inputs do not match the graph");
  }
  const std::size_t R = g.relations.size();
  RgcnForward f;
  for (std::size_t k = 0; k <= R; ++k) f.t1.push_back(stacked_times(x, p.embeddings, p.w1[k]));
  f.h1_pre = f.t1[0];
  for (std::size_t r = 0; r < R; ++r) add_inplace(f.h1_pre, spmm(g.adjacency[r], f.t1[r + 1]));
  f.h1 = relu(f.h1_pre);
  for (std::size_t k = 0; k <= R; ++k) f.t2.push_back(matmul(f.h1, p.w2[k]));
  f.logits = f.t2[0];
  for (std::size_t r = 0; r < R; ++r) add_inplace(f.logits, spmm(g.adjacency[r], f.t2[r + 1]));
  f.probs = softmax_rows(f.logits);
  return f;
}

RgcnGrads rgcn_backward(const RelationalGraph& g, const CsrMatrix& x, const RgcnParams& p, const RgcnForward& f,
                        std::span<const int> labels) {
  return backward_with(g, x.transposed(), p, f, labels);
}

RgcnModel train_rgcn(const RelationalGraph& g, const CsrMatrix& x, std::span<const int> company_labels,
                     const RgcnConfig& config) {
  if (company_labels.size() != g.company_count || x.rows != g.company_count) {
    throw Error(ErrorKind::kInvalidArgument, "rgcn: features and labels must cover every company");
  }
  if (config.hidden < 1 || config.epochs < 0) throw Error(ErrorKind::kInvalidArgument, "rgcn: bad config");
  std::vector<int> labels(g.node_count(), -1);
  for (std::size_t i = 0; i < company_labels.size(); ++i) {
    if (company_labels[i] >= kNumClasses) throw Error(ErrorKind::kInvalidArgument, "rgcn: class out of range");
    labels[i] = company_labels[i];
  }
  masked_cross_entropy(Matrix(labels.size(), kNumClasses, 1.0), labels);  // rejects an empty mask

  RgcnModel m;
  m.config = config;
  m.graph = g;
  m.input_dim = x.cols;
  m.params = init_rgcn_params(g, x.cols, config);

  std::vector<Matrix*> params = {&m.params.embeddings};
  for (auto& w : m.params.w1) params.push_back(&w);
  for (auto& w : m.params.w2) params.push_back(&w);
  Adam adam(params, config.adam);
  const CsrMatrix x_t = x.transposed();
  m.loss_history.reserve(static_cast<std::size_t>(config.epochs));
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const RgcnForward f = rgcn_forward(m.graph, x, m.params);
    const RgcnGrads grads = backward_with(m.graph, x_t, m.params, f, labels);
    if (!all_finite(grads)) {
      throw Error(ErrorKind::kNumeric, "rgcn: non-finite loss or gradient at epoch " + std::to_string(epoch));
    }
    m.loss_history.push_back(grads.loss);
    std::vector<const Matrix*> gs = {&grads.embeddings};
    for (const auto& w : grads.w1) gs.push_back(&w);
    for (const auto& w : grads.w2) gs.push_back(&w);
    adam.step(gs);
  }
  return m;
}

Matrix predict_rgcn(const RgcnModel& m, const CsrMatrix& x) {
  const Matrix probs = rgcn_forward(m.graph, x, m.params).probs;
  return rows_of(probs, 0, m.graph.company_count);
}

nlohmann::json to_json(const RgcnModel& m) {
  nlohmann::json links = nlohmann::json::array();
  for (const auto& pairs : m.graph.links) {
    nlohmann::json l = nlohmann::json::array();
    for (auto [i, j] : pairs) {
      if (i < j) l.push_back({i, j});  // the reverse direction is implied
    }
    links.push_back(std::move(l));
  }
  nlohmann::json w1 = nlohmann::json::array(), w2 = nlohmann::json::array();
  for (const auto& w : m.params.w1) w1.push_back(detail::matrix_to_json(w));
  for (const auto& w : m.params.w2) w2.push_back(detail::matrix_to_json(w));
  return {{"kind", "rgcn"},
          {"config",
           {{"hidden", m.config.hidden},
            {"epochs", m.config.epochs},
            {"learning_rate", m.config.adam.learning_rate},
            {"beta1", m.config.adam.beta1},
            {"beta2", m.config.adam.beta2},
            {"epsilon", m.config.adam.epsilon},
            {"seed", m.config.seed},
            {"min_relation_count", m.config.min_relation_count},
            {"embedding_scale", m.config.embedding_scale}}},
          {"input_dim", m.input_dim},
          {"vocab_hash", m.vocab_hash},
          {"node_ids", m.graph.node_ids},
          {"company_count", m.graph.company_count},
          {"relations", m.graph.relations},
          {"links", std::move(links)},
          {"embeddings", detail::matrix_to_json(m.params.embeddings)},
          {"w1", std::move(w1)},
          {"w2", std::move(w2)},
          {"final_loss", m.loss_history.empty() ? 0.0 : m.loss_history.back()}};
}

RgcnModel rgcn_from_json(const nlohmann::json& j) {
  try {
    if (j.at("kind") != "rgcn") throw Error(ErrorKind::kParse, "model file is not an rgcn model");
    RgcnModel m;
    const auto& c = j.at("config");
    m.config.hidden = c.at("hidden").get<int>();
    m.config.epochs = c.at("epochs").get<int>();
    m.config.adam.learning_rate = c.at("learning_rate").get<double>();
    m.config.adam.beta1 = c.at("beta1").get<double>();
    m.config.adam.beta2 = c.at("beta2").get<double>();
    m.config.adam.epsilon = c.at("epsilon").get<double>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.config.min_relation_count = c.at("min_relation_count").get<int>();
    m.config.embedding_scale = c.at("embedding_scale").get<double>();
    m.input_dim = j.at("input_dim").get<std::size_t>();
    m.vocab_hash = j.at("vocab_hash").get<std::uint64_t>();
    m.graph.node_ids = j.at("node_ids").get<std::vector<std::string>>();
    m.graph.company_count = j.at("company_count").get<std::size_t>();
    m.graph.relations = j.at("relations").get<std::vector<std::string>>();
    const std::size_t n = m.graph.node_ids.size();
    for (const auto& l : j.at("links")) {
      std::set<std::pair<std::uint32_t, std::uint32_t>> s;
      for (const auto& e : l) {
        const auto a = e.at(0).get<std::uint32_t>();
        const auto b = e.at(1).get<std::uint32_t>();
        if (a >= n || b >= n) throw Error(ErrorKind::kParse, "rgcn model: link out of range");
        s.insert({a, b});
        s.insert({b, a});
      }
      m.graph.links.emplace_back(s.begin(), s.end());
    }
    if (m.graph.links.size() != m.graph.relations.size() || m.graph.company_count > n) {
      throw Error(ErrorKind::kParse, "rgcn model: inconsistent graph");
    }
    normalize_links(m.graph);
    m.params.embeddings = detail::matrix_from_json(j.at("embeddings"));
    for (const auto& w : j.at("w1")) m.params.w1.push_back(detail::matrix_from_json(w));
    for (const auto& w : j.at("w2")) m.params.w2.push_back(detail::matrix_from_json(w));
    if (m.params.w1.size() != m.graph.relations.size() + 1 || m.params.w2.size() != m.params.w1.size()) {
      throw Error(ErrorKind::kParse, "rgcn model: weight count does not match relations");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("rgcn model: ") + e.what());
  }
}

}  // namespace sdg::models
