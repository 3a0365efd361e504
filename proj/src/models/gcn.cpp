// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdg/models/gcn.hpp"

#include <algorithm>
#include <cmath>

#include "json_matrix.hpp"
#include "sdg/error.hpp"
#include "sdg/rng.hpp"

namespace sdg::models {

CsrMatrix normalized_adjacency(std::size_t n,
                               std::span<const std::pair<graph::NodeIndex, graph::NodeIndex>> edges) {
  std::vector<double> degree(n, 1.0);  // self-loop
  for (auto [a, b] : edges) {
    if (a >= n || b >= n || a == b) throw Error(ErrorKind::kInvalidArgument, "adjacency: bad edge");
    degree[a] += 1.0;
    degree[b] += 1.0;
  }
  std::vector<double> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(degree[i]);
  std::vector<CsrMatrix::Triplet> t;
  t.reserve(n + 2 * edges.size());
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i), inv_sqrt[i] * inv_sqrt[i]});
  }
  for (auto [a, b] : edges) {
    const double w = inv_sqrt[a] * inv_sqrt[b];
    t.push_back({a, b, w});
    t.push_back({b, a, w});
  }
  return CsrMatrix::from_triplets(n, n, std::move(t));
}

CsrMatrix normalized_adjacency(const graph::SummaryGraph& sg) {
  return normalized_adjacency(sg.node_count(), sg.edges());
}

GcnParams init_gcn_params(std::size_t input_dim, int hidden, std::uint64_t seed) {
  Rng rng(seed);
  auto glorot = [&](std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (double& v : m.values()) v = rng.uniform(-limit, limit);
    return m;
  };
  GcnParams p;
  p.w1 = glorot(input_dim, static_cast<std::size_t>(hidden));
  p.w2 = glorot(static_cast<std::size_t>(hidden), kNumClasses);
  return p;
}

GcnForward gcn_forward(const CsrMatrix& a_hat, const CsrMatrix& x, const GcnParams& p) {
  GcnForward f;
  f.xw1 = spmm(x, p.w1);
  f.h1_pre = spmm(a_hat, f.xw1);
  f.h1 = f.h1_pre;
  for (double& v : f.h1.values()) v = std::max(v, 0.0);
  f.h1w2 = matmul(f.h1, p.w2);
  f.logits = spmm(a_hat, f.h1w2);
  f.probs = softmax_rows(f.logits);
  return f;
}

double masked_cross_entropy(const Matrix& probs, std::span<const int> labels) {
  if (labels.size() != probs.rows()) throw Error(ErrorKind::kInvalidArgument, "labels do not match rows");
  double loss = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) continue;
    loss -= std::log(probs(i, static_cast<std::size_t>(labels[i])));
    ++n;
  }
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "no labeled nodes in the training mask");
  return loss / n;
}

namespace {

GcnGrads backward_with(const CsrMatrix& a_t, const CsrMatrix& x_t, const GcnParams& p, const GcnForward& f,
                       std::span<const int> labels) {
  GcnGrads g;
  g.loss = masked_cross_entropy(f.probs, labels);
  const double n = static_cast<double>(std::count_if(labels.begin(), labels.end(), [](int c) { return c >= 0; }));

  Matrix d_logits(f.probs.rows(), f.probs.cols());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) continue;
    for (std::size_t c = 0; c < f.probs.cols(); ++c) {
      d_logits(i, c) = (f.probs(i, c) - (static_cast<int>(c) == labels[i] ? 1.0 : 0.0)) / n;
    }
  }
  const Matrix d_h1w2 = spmm(a_t, d_logits);
  g.w2 = matmul_tn(f.h1, d_h1w2);
  Matrix d_h1 = matmul_nt(d_h1w2, p.w2);
  for (std::size_t i = 0; i < d_h1.size(); ++i) {
    if (!(f.h1_pre.values()[i] > 0.0)) d_h1.values()[i] = 0.0;
  }
  const Matrix d_xw1 = spmm(a_t, d_h1);
  g.w1 = spmm(x_t, d_xw1);
  return g;
}

}  // namespace

GcnGrads gcn_backward(const CsrMatrix& a_hat, const CsrMatrix& x, const GcnParams& p, const GcnForward& f,
                      std::span<const int> labels) {
  return backward_with(a_hat.transposed(), x.transposed(), p, f, labels);
}

std::optional<std::size_t> GcnModel::find(std::string_view id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
  if (it == nodes.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes.begin());
}

GcnModel train_gcn(const graph::SummaryGraph& sg, const CsrMatrix& x, std::span<const int> labels,
                   const GcnConfig& config) {
  if (x.rows != sg.node_count() || labels.size() != sg.node_count()) {
    throw Error(ErrorKind::kInvalidArgument, "gcn: features and labels must cover every graph node");
  }
  if (config.hidden < 1 || config.epochs < 0) throw Error(ErrorKind::kInvalidArgument, "gcn: bad config");
  for (int c : labels) {
    if (c >= kNumClasses) throw Error(ErrorKind::kInvalidArgument, "gcn: class out of range");
  }
  GcnModel m;
  m.config = config;
  m.nodes.assign(sg.nodes().begin(), sg.nodes().end());
  m.edges.assign(sg.edges().begin(), sg.edges().end());
  m.a_hat = normalized_adjacency(sg);
  m.input_dim = x.cols;
  m.params = init_gcn_params(x.cols, config.hidden, config.seed);
  masked_cross_entropy(Matrix(labels.size(), kNumClasses, 1.0), labels);  // rejects an empty mask

  const CsrMatrix a_t = m.a_hat.transposed();
  const CsrMatrix x_t = x.transposed();
  Matrix* params[] = {&m.params.w1, &m.params.w2};
  Adam adam(params, config.adam);
  m.loss_history.reserve(static_cast<std::size_t>(config.epochs));
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const GcnForward f = gcn_forward(m.a_hat, x, m.params);
    const GcnGrads g = backward_with(a_t, x_t, m.params, f, labels);
    if (!std::isfinite(g.loss) || !g.w1.all_finite() || !g.w2.all_finite()) {
      throw Error(ErrorKind::kNumeric, "gcn: non-finite loss or gradient at epoch " + std::to_string(epoch) +
                                           " (loss " + std::to_string(g.loss) + ")");
    }
    m.loss_history.push_back(g.loss);
    const Matrix* grads[] = {&g.w1, &g.w2};
    adam.step(grads);
    if (!m.params.w1.all_finite() || !m.params.w2.all_finite()) {
      throw Error(ErrorKind::kNumeric, "gcn: parameters became non-finite at epoch " + std::to_string(epoch));
    }
  }
  return m;
}

CsrMatrix feature_rows(const features::FeatureMatrix& X, std::span<const std::string> ids) {
  std::vector<CsrMatrix::Triplet> t;
  for (std::size_t r = 0; r < ids.size(); ++r) {
    for (auto [c, v] : X.row(ids[r])) {
      t.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), static_cast<double>(v)});
    }
  }
  return CsrMatrix::from_triplets(ids.size(), X.vocab.size(), std::move(t));
}

GcnModel train_gcn(const graph::SummaryGraph& sg, const features::FeatureMatrix& X,
                   const features::LabelVector& y, std::span<const std::string> train_ids,
                   const GcnConfig& config) {
  std::vector<int> labels(sg.node_count(), -1);
  for (const auto& id : train_ids) {
    auto i = sg.find(id);
    auto it = y.values.find(id);
    if (!i) throw Error(ErrorKind::kNotFound, "gcn: training company " + id + " is not in the summary graph");
    if (it == y.values.end()) throw Error(ErrorKind::kInvalidArgument, "gcn: no label for " + id);
    labels[*i] = it->second;
  }
  GcnModel m = train_gcn(sg, feature_rows(X, sg.nodes()), labels, config);
  m.vocab_hash = X.vocab.hash();
  return m;
}

Matrix predict_gcn_all(const GcnModel& m, const CsrMatrix& x) {
  if (x.rows != m.nodes.size() || x.cols != m.input_dim) {
    throw Error(ErrorKind::kInvalidArgument, "gcn: feature matrix does not match the model");
  }
  return gcn_forward(m.a_hat, x, m.params).probs;
}

std::vector<NodePrediction> predict_gcn(const GcnModel& m, const CsrMatrix& x, std::span<const std::string> ids) {
  std::vector<std::size_t> rows;
  for (const auto& id : ids) {
    auto i = m.find(id);
    if (!i) throw Error(ErrorKind::kNotFound, "gcn: unknown node " + id);
    rows.push_back(*i);
  }
  const Matrix probs = predict_gcn_all(m, x);
  std::vector<NodePrediction> out;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    NodePrediction p;
    p.id = ids[k];
    for (int c = 0; c < kNumClasses; ++c) p.probs[c] = probs(rows[k], static_cast<std::size_t>(c));
    p.cls = argmax(p.probs);
    out.push_back(std::move(p));
  }
  return out;
}

nlohmann::json to_json(const GcnModel& m) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [a, b] : m.edges) edges.push_back({a, b});
  return {{"kind", "gcn"},
          {"config",
           {{"hidden", m.config.hidden},
            {"epochs", m.config.epochs},
            {"learning_rate", m.config.adam.learning_rate},
            {"beta1", m.config.adam.beta1},
            {"beta2", m.config.adam.beta2},
            {"epsilon", m.config.adam.epsilon},
            {"seed", m.config.seed}}},
          {"input_dim", m.input_dim},
          {"vocab_hash", m.vocab_hash},
          {"nodes", m.nodes},
          {"edges", std::move(edges)},
          {"w1", detail::matrix_to_json(m.params.w1)},
          {"w2", detail::matrix_to_json(m.params.w2)},
          {"final_loss", m.loss_history.empty() ? 0.0 : m.loss_history.back()}};
}

GcnModel gcn_from_json(const nlohmann::json& j) {
  try {
    if (j.at("kind") != "gcn") throw Error(ErrorKind::kParse, "model file is not a gcn model");
    GcnModel m;
    const auto& c = j.at("config");
    m.config.hidden = c.at("hidden").get<int>();
    m.config.epochs = c.at("epochs").get<int>();
    m.config.adam.learning_rate = c.at("learning_rate").get<double>();
    m.config.adam.beta1 = c.at("beta1").get<double>();
    m.config.adam.beta2 = c.at("beta2").get<double>();
    m.config.adam.epsilon = c.at("epsilon").get<double>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.input_dim = j.at("input_dim").get<std::size_t>();
    m.vocab_hash = j.at("vocab_hash").get<std::uint64_t>();
    m.nodes = j.at("nodes").get<std::vector<std::string>>();
    for (const auto& e : j.at("edges")) m.edges.emplace_back(e.at(0).get<graph::NodeIndex>(), e.at(1).get<graph::NodeIndex>());
    m.a_hat = normalized_adjacency(m.nodes.size(), m.edges);
    m.params.w1 = detail::matrix_from_json(j.at("w1"));
    m.params.w2 = detail::matrix_from_json(j.at("w2"));
    if (m.params.w1.rows() != m.input_dim || m.params.w2.cols() != kNumClasses ||
        m.params.w1.cols() != m.params.w2.rows()) {
      throw Error(ErrorKind::kParse, "gcn model: inconsistent weight shapes");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("gcn model: ") + e.what());
  }
}

}  // namespace sdg::models
