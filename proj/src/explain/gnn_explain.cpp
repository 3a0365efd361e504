// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "sdg/error.hpp"
#include "sdg/explain.hpp"
#include "sdg/rng.hpp"

namespace sdg::explain {

namespace {

using models::GcnModel;

// The focal node's 2-hop block of the model, in ascending global order so
// per-row arithmetic matches the full-graph forward pass exactly.
struct Computation {
  std::vector<std::size_t> nodes;  // global indices
  std::size_t focal = 0;           // local index
  std::vector<std::pair<graph::NodeIndex, graph::NodeIndex>> global_edges;
  std::vector<std::pair<std::size_t, std::size_t>> value_pos;  // (a,b) and (b,a) slots in `base`
  CsrMatrix base;
  Matrix xw1;
};

std::size_t require_node(const GcnModel& m, std::string_view node) {
  auto i = m.find(node);
  if (!i) throw Error(ErrorKind::kNotFound, "explain: unknown node " + std::string(node));
  return *i;
}

std::vector<std::size_t> two_hop(const GcnModel& m, std::size_t f) {
  std::vector<char> in(m.nodes.size(), 0);
  in[f] = 1;
  std::vector<std::size_t> frontier = {f};
  for (int hop = 0; hop < 2; ++hop) {
    std::vector<std::size_t> next;
    for (std::size_t i : frontier) {
      for (std::size_t p = m.a_hat.row_ptr[i]; p < m.a_hat.row_ptr[i + 1]; ++p) {
        const std::size_t j = m.a_hat.col[p];
        if (!in[j]) {
          in[j] = 1;
          next.push_back(j);
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i]) out.push_back(i);
  }
  return out;
}

Computation build(const GcnModel& m, const CsrMatrix& x, std::string_view node) {
  if (x.rows != m.nodes.size() || x.cols != m.input_dim) {
    throw Error(ErrorKind::kInvalidArgument, "explain: feature matrix does not match the model");
  }
  const std::size_t f = require_node(m, node);
  Computation c;
  c.nodes = two_hop(m, f);
  std::vector<std::uint32_t> local(m.nodes.size(), UINT32_MAX);
  for (std::size_t k = 0; k < c.nodes.size(); ++k) local[c.nodes[k]] = static_cast<std::uint32_t>(k);
  c.focal = local[f];

  std::vector<CsrMatrix::Triplet> a, xs;
  for (std::size_t k = 0; k < c.nodes.size(); ++k) {
    const std::size_t i = c.nodes[k];
    for (std::size_t p = m.a_hat.row_ptr[i]; p < m.a_hat.row_ptr[i + 1]; ++p) {
      const std::uint32_t j = local[m.a_hat.col[p]];
      if (j != UINT32_MAX) a.push_back({static_cast<std::uint32_t>(k), j, m.a_hat.val[p]});
    }
    for (std::size_t p = x.row_ptr[i]; p < x.row_ptr[i + 1]; ++p) {
      xs.push_back({static_cast<std::uint32_t>(k), x.col[p], x.val[p]});
    }
  }
  c.base = CsrMatrix::from_triplets(c.nodes.size(), c.nodes.size(), std::move(a));
  c.xw1 = spmm(CsrMatrix::from_triplets(c.nodes.size(), x.cols, std::move(xs)), m.params.w1);

  auto slot = [&](std::uint32_t r, std::uint32_t col) {
    const auto* begin = c.base.col.data() + c.base.row_ptr[r];
    const auto* end = c.base.col.data() + c.base.row_ptr[r + 1];
    return static_cast<std::size_t>(std::lower_bound(begin, end, col) - c.base.col.data());
  };
  for (auto [ga, gb] : m.edges) {
    const std::uint32_t la = local[ga], lb = local[gb];
    if (la == UINT32_MAX || lb == UINT32_MAX) continue;
    c.global_edges.push_back({ga, gb});
    c.value_pos.push_back({slot(la, lb), slot(lb, la)});
  }
  return c;
}

struct MaskedPass {
  CsrMatrix a;
  Matrix h1_pre;
  Matrix h1;
  Matrix h1w2;
  ProbabilityVector probs{};
};

MaskedPass run(const GcnModel& m, const Computation& c, std::span<const double> mask) {
  MaskedPass out;
  out.a = c.base;
  for (std::size_t e = 0; e < mask.size(); ++e) {
    out.a.val[c.value_pos[e].first] = c.base.val[c.value_pos[e].first] * mask[e];
    out.a.val[c.value_pos[e].second] = c.base.val[c.value_pos[e].second] * mask[e];
  }
  out.h1_pre = spmm(out.a, c.xw1);
  out.h1 = out.h1_pre;
  for (double& v : out.h1.values()) v = std::max(v, 0.0);
  out.h1w2 = matmul(out.h1, m.params.w2);
  const Matrix logits = spmm(out.a, out.h1w2);
  Matrix row(1, kNumClasses);
  std::copy(logits.row(c.focal).begin(), logits.row(c.focal).end(), row.data());
  const Matrix p = softmax_rows(row);
  for (int k = 0; k < kNumClasses; ++k) out.probs[k] = p(0, static_cast<std::size_t>(k));
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::vector<std::pair<graph::NodeIndex, graph::NodeIndex>> computation_edges(const GcnModel& m,
                                                                             std::string_view node) {
  const std::size_t f = require_node(m, node);
  const auto nodes = two_hop(m, f);
  std::vector<char> in(m.nodes.size(), 0);
  for (std::size_t i : nodes) in[i] = 1;
  std::vector<std::pair<graph::NodeIndex, graph::NodeIndex>> out;
  for (auto e : m.edges) {
    if (in[e.first] && in[e.second]) out.push_back(e);
  }
  return out;
}

ProbabilityVector masked_probabilities(const GcnModel& m, const CsrMatrix& x, std::string_view node,
                                       std::span<const double> mask) {
  const Computation c = build(m, x, node);
  if (mask.size() != c.global_edges.size()) {
    throw Error(ErrorKind::kInvalidArgument, "explain: mask length does not match the computation edges");
  }
  return run(m, c, mask).probs;
}

EdgeExplanation gnn_explain(const GcnModel& m, const CsrMatrix& x, std::string_view node,
                            const GnnExplainConfig& config) {
  if (config.steps < 0 || config.sparsity < 0.0) throw Error(ErrorKind::kInvalidArgument, "explain: bad config");
  const Computation c = build(m, x, node);
  const std::size_t E = c.global_edges.size();

  EdgeExplanation out;
  out.company_id = std::string(node);
  const std::vector<double> ones(E, 1.0);
  const ProbabilityVector base = run(m, c, ones).probs;
  out.predicted_class = argmax(base);
  const auto cls = static_cast<std::size_t>(out.predicted_class);
  out.unmasked_probability = base[cls];
  if (E == 0) {
    out.fidelity = out.unmasked_probability;
    return out;
  }

  Rng rng(config.seed);
  Matrix logits(E, 1);
  for (double& v : logits.values()) v = config.init_logit + 0.1 * rng.normal();
  Matrix* params[] = {&logits};
  models::Adam adam(params, config.adam);
  Matrix grad(E, 1);
  std::vector<double> mask(E);
  auto sigmoid = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  const std::size_t hidden = c.xw1.cols();

  for (int step = 0; step < config.steps; ++step) {
    for (std::size_t e = 0; e < E; ++e) mask[e] = sigmoid(logits.values()[e]);
    const MaskedPass pass = run(m, c, mask);

    // d log p_c / d logits_focal
    std::vector<double> g(kNumClasses);
    for (std::size_t k = 0; k < kNumClasses; ++k) g[k] = (k == cls ? 1.0 : 0.0) - pass.probs[k];

    // Back through the second layer: only the focal row matters.
    Matrix d_h1_pre(c.nodes.size(), hidden);
    std::vector<double> d_a2(pass.a.nnz(), 0.0);
    for (std::size_t p = pass.a.row_ptr[c.focal]; p < pass.a.row_ptr[c.focal + 1]; ++p) {
      const std::size_t j = pass.a.col[p];
      d_a2[p] = dot(g, pass.h1w2.row(j));
      for (std::size_t h = 0; h < hidden; ++h) {
        if (!(pass.h1_pre(j, h) > 0.0)) continue;
        double s = 0.0;
        for (std::size_t k = 0; k < kNumClasses; ++k) s += m.params.w2(h, k) * g[k];
        d_h1_pre(j, h) += pass.a.val[p] * s;
      }
    }

    for (std::size_t e = 0; e < E; ++e) {
      const auto [pab, pba] = c.value_pos[e];
      const std::size_t a = std::upper_bound(c.base.row_ptr.begin(), c.base.row_ptr.end(), pab) -
                            c.base.row_ptr.begin() - 1;
      const std::size_t b = c.base.col[pab];
      const double d_ab = dot(d_h1_pre.row(a), c.xw1.row(b)) + d_a2[pab];
      const double d_ba = dot(d_h1_pre.row(b), c.xw1.row(a)) + d_a2[pba];
      const double d_mask = c.base.val[pab] * d_ab + c.base.val[pba] * d_ba - config.sparsity;
      grad.values()[e] = -mask[e] * (1.0 - mask[e]) * d_mask;  // Adam minimizes
    }
    const Matrix* grads[] = {&grad};
    adam.step(grads);
  }

  for (std::size_t e = 0; e < E; ++e) mask[e] = sigmoid(logits.values()[e]);
  std::vector<std::size_t> order(E);
  for (std::size_t e = 0; e < E; ++e) order[e] = e;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return mask[i] > mask[j]; });
  std::vector<double> hard(E, 0.0);
  for (std::size_t e : order) {
    const auto [ga, gb] = c.global_edges[e];
    MaskedEdge me{m.nodes[ga], m.nodes[gb], mask[e]};
    out.all_edges.push_back(me);
    if (mask[e] >= 0.5) {
      out.edges.push_back(me);
      hard[e] = 1.0;
    }
  }
  if (out.edges.empty()) {
    out.edges = out.all_edges;
    hard.assign(E, 1.0);
  }
  out.fidelity = run(m, c, hard).probs[cls];
  return out;
}

}  // namespace sdg::explain
