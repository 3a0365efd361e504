// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdg/models/brf.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include "sdg/error.hpp"

namespace sdg::models {

namespace {

using features::SparseRow;

// Flattened sparse row for fast lookups during growth.
struct FlatRow {
  std::vector<std::size_t> col;
  std::vector<double> val;

  double at(std::size_t c) const {
    auto it = std::lower_bound(col.begin(), col.end(), c);
    return (it != col.end() && *it == c) ? val[static_cast<std::size_t>(it - col.begin())] : 0.0;
  }
};

double gini(const ClassHistogram& h, int n) {
  if (n == 0) return 0.0;
  double s = 0.0;
  for (int c : h) {
    const double p = static_cast<double>(c) / n;
    s += p * p;
  }
  return 1.0 - s;
}

bool is_pure(const ClassHistogram& h) {
  return std::count_if(h.begin(), h.end(), [](int c) { return c > 0; }) <= 1;
}

class TreeGrower {
 public:
  TreeGrower(const std::vector<FlatRow>& rows, std::span<const int> classes, std::size_t n_features,
             int max_depth, Rng& rng)
      : rows_(rows), classes_(classes), max_depth_(max_depth), rng_(rng),
        mtry_(static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n_features))))),
        count_(n_features, 0), lo_(n_features, 0.0), hi_(n_features, 0.0) {}

  DecisionTree grow(std::vector<std::size_t> samples) {
    DecisionTree tree;
    tree.nodes.emplace_back();
    build(tree, 0, std::move(samples), 0);
    return tree;
  }

 private:
  struct Candidate {
    std::size_t feature = 0;
    double threshold = 0.0;
    double impurity = 0.0;
  };

  void build(DecisionTree& tree, int node, std::vector<std::size_t> samples, int depth) {
    ClassHistogram h{};
    for (std::size_t s : samples) ++h[classes_[s]];
    tree.nodes[node].histogram = h;
    if (depth >= max_depth_ || samples.size() < 2 || is_pure(h)) return;

    const auto split = best_split(samples);
    if (!split) return;

    std::vector<std::size_t> left, right;
    for (std::size_t s : samples) {
      (rows_[s].at(split->feature) <= split->threshold ? left : right).push_back(s);
    }
    const int l = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    tree.nodes[node].feature = static_cast<int>(split->feature);
    tree.nodes[node].threshold = split->threshold;
    tree.nodes[node].left = l;
    tree.nodes[node].right = l + 1;
    samples.clear();
    samples.shrink_to_fit();
    build(tree, l, std::move(left), depth + 1);
    build(tree, l + 1, std::move(right), depth + 1);
  }

  // Features that vary across the node's samples, ascending. With
  // non-negative sparse rows a feature can only vary if some sample has a
  // non-zero value for it.
  std::vector<std::size_t> varying_features(const std::vector<std::size_t>& samples) {
    std::vector<std::size_t> touched;
    for (std::size_t s : samples) {
      const FlatRow& r = rows_[s];
      for (std::size_t k = 0; k < r.col.size(); ++k) {
        const std::size_t c = r.col[k];
        const double v = r.val[k];
        if (count_[c]++ == 0) {
          touched.push_back(c);
          lo_[c] = hi_[c] = v;
        } else {
          lo_[c] = std::min(lo_[c], v);
          hi_[c] = std::max(hi_[c], v);
        }
      }
    }
    std::vector<std::size_t> out;
    for (std::size_t c : touched) {
      const bool has_implicit_zero = count_[c] < samples.size();
      const bool varies = has_implicit_zero ? (lo_[c] != 0.0 || hi_[c] != 0.0) : lo_[c] != hi_[c];
      if (varies) out.push_back(c);
      count_[c] = 0;
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::optional<Candidate> best_split(const std::vector<std::size_t>& samples) {
    std::vector<std::size_t> features = varying_features(samples);
    if (features.empty()) return std::nullopt;
    // Uniform choice of mtry features among the varying ones, which is what
    // drawing from all features and skipping constant ones amounts to.
    const std::size_t k = std::min(mtry_, features.size());
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng_.below(features.size() - i));
      std::swap(features[i], features[j]);
    }

    const int n = static_cast<int>(samples.size());
    std::optional<Candidate> best;
    std::vector<std::pair<double, int>> vals(samples.size());
    for (std::size_t fi = 0; fi < k; ++fi) {
      const std::size_t f = features[fi];
      for (std::size_t i = 0; i < samples.size(); ++i) {
        vals[i] = {rows_[samples[i]].at(f), classes_[samples[i]]};
      }
      std::sort(vals.begin(), vals.end());
      ClassHistogram left{}, right{};
      for (const auto& [v, c] : vals) ++right[c];
      for (int i = 0; i + 1 < n; ++i) {
        --right[vals[i].second];
        ++left[vals[i].second];
        if (vals[i].first == vals[i + 1].first) continue;
        const int nl = i + 1;
        const int nr = n - nl;
        const double imp = (nl * gini(left, nl) + nr * gini(right, nr)) / n;
        if (!best || imp < best->impurity) {
          best = Candidate{f, 0.5 * (vals[i].first + vals[i + 1].first), imp};
        }
      }
    }
    return best;
  }

  const std::vector<FlatRow>& rows_;
  std::span<const int> classes_;
  int max_depth_;
  Rng& rng_;
  std::size_t mtry_;
  std::vector<std::size_t> count_;
  std::vector<double> lo_;
  std::vector<double> hi_;
};

}  // namespace

const TreeNode& DecisionTree::leaf_for(const SparseRow& row) const {
  const TreeNode* n = &nodes[0];
  while (n->feature >= 0) {
    auto it = row.find(static_cast<std::size_t>(n->feature));
    const double v = it == row.end() ? 0.0 : it->second;
    n = &nodes[static_cast<std::size_t>(v <= n->threshold ? n->left : n->right)];
  }
  return *n;
}

int DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> d(nodes.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    best = std::max(best, d[i]);
    if (nodes[i].feature >= 0) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return best;
}

ProbabilityVector BrfModel::predict_proba(const SparseRow& row) const {
  if (!row.empty() && row.rbegin()->first >= n_features) {
    throw Error(ErrorKind::kInvalidArgument, "brf: feature column " + std::to_string(row.rbegin()->first) +
                                                 " outside model width " + std::to_string(n_features));
  }
  ProbabilityVector p{};
  if (trees.empty()) return p;
  for (const DecisionTree& t : trees) {
    const ClassHistogram& h = t.leaf_for(row).histogram;
    int total = 0;
    for (int c : h) total += c;
    for (int c = 0; c < kNumClasses; ++c) p[c] += static_cast<double>(h[c]) / total;
  }
  for (double& v : p) v /= static_cast<double>(trees.size());
  return p;
}

std::vector<std::size_t> balanced_bootstrap(std::span<const int> classes, Rng& rng) {
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < classes.size(); ++i) by_class[classes[i]].push_back(i);
  std::size_t m = classes.size();
  for (const auto& [c, members] : by_class) m = std::min(m, members.size());
  std::vector<std::size_t> out;
  out.reserve(m * by_class.size());
  for (const auto& [c, members] : by_class) {
    for (std::size_t i = 0; i < m; ++i) out.push_back(members[rng.below(members.size())]);
  }
  return out;
}

BrfModel train_brf(std::span<const SparseRow> rows, std::span<const int> classes, std::size_t n_features,
                   const BrfConfig& config) {
  if (rows.size() != classes.size()) {
    throw Error(ErrorKind::kInvalidArgument, "brf: rows and labels differ in length");
  }
  if (rows.empty()) throw Error(ErrorKind::kInvalidArgument, "brf: empty training set");
  if (config.n_trees < 1 || config.max_depth < 1) {
    throw Error(ErrorKind::kInvalidArgument, "brf: n_trees and max_depth must be >= 1");
  }
  ClassHistogram present{};
  for (int c : classes) {
    if (c < 0 || c >= kNumClasses) throw Error(ErrorKind::kInvalidArgument, "brf: class out of range");
    ++present[c];
  }
  if (is_pure(present)) {
    throw Error(ErrorKind::kInvalidArgument, "brf: training set has a single class");
  }

  std::vector<FlatRow> flat(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (auto [c, v] : rows[i]) {
      if (c >= n_features) throw Error(ErrorKind::kInvalidArgument, "brf: feature column out of range");
      flat[i].col.push_back(c);
      flat[i].val.push_back(v);
    }
  }

  BrfModel model;
  model.config = config;
  model.n_features = n_features;
  model.trees.resize(static_cast<std::size_t>(config.n_trees));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (int t = next++; t < config.n_trees; t = next++) {
      try {
        Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(t)));
        auto sample = balanced_bootstrap(classes, rng);
        TreeGrower grower(flat, classes, n_features, config.max_depth, rng);
        model.trees[static_cast<std::size_t>(t)] = grower.grow(std::move(sample));
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  int threads = config.threads > 0 ? config.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, config.n_trees);
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return model;
}

BrfModel train_brf(const features::FeatureMatrix& X, const features::LabelVector& y,
                   std::span<const std::string> train_ids, const BrfConfig& config) {
  std::vector<SparseRow> rows;
  std::vector<int> classes;
  for (const auto& id : train_ids) {
    auto it = y.values.find(id);
    if (it == y.values.end()) throw Error(ErrorKind::kInvalidArgument, "brf: no label for " + id);
    rows.push_back(X.row(id));
    classes.push_back(it->second);
  }
  BrfModel m = train_brf(rows, classes, X.vocab.size(), config);
  m.vocab_hash = X.vocab.hash();
  return m;
}

nlohmann::json to_json(const BrfModel& m) {
  nlohmann::json trees = nlohmann::json::array();
  for (const DecisionTree& t : m.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& n : t.nodes) {
      nodes.push_back({n.feature, n.threshold, n.left, n.right, n.histogram});
    }
    trees.push_back(std::move(nodes));
  }
  return {{"kind", "brf"},
          {"config",
           {{"n_trees", m.config.n_trees}, {"max_depth", m.config.max_depth}, {"seed", m.config.seed}}},
          {"n_features", m.n_features},
          {"vocab_hash", m.vocab_hash},
          {"trees", std::move(trees)}};
}

BrfModel brf_from_json(const nlohmann::json& j) {
  try {
    if (j.at("kind") != "brf") throw Error(ErrorKind::kParse, "model file is not a brf model");
    BrfModel m;
    m.config.n_trees = j.at("config").at("n_trees").get<int>();
    m.config.max_depth = j.at("config").at("max_depth").get<int>();
    m.config.seed = j.at("config").at("seed").get<std::uint64_t>();
    m.n_features = j.at("n_features").get<std::size_t>();
    m.vocab_hash = j.at("vocab_hash").get<std::uint64_t>();
    for (const auto& jt : j.at("trees")) {
      DecisionTree t;
      for (const auto& jn : jt) {
        TreeNode n;
        n.feature = jn.at(0).get<int>();
        n.threshold = jn.at(1).get<double>();
        n.left = jn.at(2).get<int>();
        n.right = jn.at(3).get<int>();
        n.histogram = jn.at(4).get<ClassHistogram>();
        t.nodes.push_back(n);
      }
      const int size = static_cast<int>(t.nodes.size());
      for (const TreeNode& n : t.nodes) {
        if (n.feature >= 0 && (n.left <= 0 || n.left >= size || n.right <= 0 || n.right >= size ||
                               static_cast<std::size_t>(n.feature) >= m.n_features)) {
          throw Error(ErrorKind::kParse, "brf model: malformed tree");
        }
      }
      if (t.nodes.empty()) throw Error(ErrorKind::kParse, "brf model: empty tree");
      m.trees.push_back(std::move(t));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("brf model: ") + e.what());
  }
}

}  // namespace sdg::models
