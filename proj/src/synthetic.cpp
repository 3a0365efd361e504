// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdg/synthetic.hpp"

#include <array>
#include <cstdio>

#include "sdg/common.hpp"
#include "sdg/rng.hpp"

namespace sdg::synthetic {

namespace {

std::string padded(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%05zu", prefix, i);
  return buf;
}

constexpr std::array<const char*, 40> kBackground = {
    "company", "group", "market", "customers", "business", "services", "products", "annual",
    "report",  "growth", "revenue", "operations", "global", "strategy", "value", "employees",
    "quarter", "results", "board", "management", "shares", "investors", "year", "new",
    "region",  "sales", "leading", "provider", "network", "segment", "industry", "international",
    "office",  "capital", "brand", "partner", "service", "digital", "platform", "solutions"};

constexpr std::array<std::array<const char*, 6>, kNumClasses> kClassWords = {{
    {"coal", "spill", "pollution", "lawsuit", "deforestation", "violation"},
    {"emissions", "fossil", "waste", "fine", "accident", "oil"},
    {"diesel", "plastic", "landfill", "complaint", "delay", "gas"},
    {"logistics", "retail", "consulting", "software", "insurance", "banking"},
    {"efficiency", "recycling", "training", "safety", "water", "health"},
    {"renewable", "circular", "biodiversity", "inclusion", "electric", "clean"},
    {"solar", "wind", "hydro", "vaccine", "reforestation", "microfinance"},
}};

// Unequal class sizes, heavier in the middle.
constexpr std::array<int, kNumClasses> kClassWeights = {1, 2, 3, 4, 3, 2, 1};

}  // namespace

PlantedGraph two_block_graph(std::size_t per_block, double p_in, double p_out, std::size_t n_features,
                             std::uint64_t seed, int class_a, int class_b) {
  Rng rng(seed);
  const std::size_t n = 2 * per_block;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(padded("n", i));
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool same = (i < per_block) == (j < per_block);
      if (rng.bernoulli(same ? p_in : p_out)) edges.push_back({ids[i], ids[j]});
    }
  }
  PlantedGraph out;
  out.sg = graph::SummaryGraph(ids, std::move(edges));
  const std::size_t half = n_features / 2;
  std::vector<CsrMatrix::Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    const bool block0 = i < per_block;
    out.classes.push_back(block0 ? class_a : class_b);
    for (std::size_t f = 0; f < n_features; ++f) {
      const bool own = (f < half) == block0;
      if (rng.bernoulli(own ? 0.3 : 0.1)) {
        t.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(f), 1.0});
      }
    }
  }
  out.x = CsrMatrix::from_triplets(n, n_features, std::move(t));
  return out;
}

PlantedStars informative_neighbor_graph(std::size_t stars, std::size_t leaves, std::uint64_t seed, int class_a,
                                        int class_b) {
  Rng rng(seed);
  constexpr std::size_t kFeatures = 6;
  std::vector<std::string> ids;
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::vector<std::size_t>> feature_of;
  std::vector<int> cls;
  PlantedStars out;
  std::vector<std::size_t> neutral;
  for (std::size_t s = 0; s < stars; ++s) {
    const std::string center = padded("s", s) + "_c";
    const std::size_t hot = rng.below(leaves);
    const bool a = rng.bernoulli(0.5);
    ids.push_back(center);
    feature_of.push_back({0});
    cls.push_back(a ? class_a : class_b);
    out.centers.push_back(center);
    for (std::size_t l = 0; l < leaves; ++l) {
      const std::string leaf = padded("s", s) + "_l" + std::to_string(l);
      edges.push_back({center, leaf});
      ids.push_back(leaf);
      if (l == hot) {
        feature_of.push_back({a ? std::size_t{1} : std::size_t{2}});
        cls.push_back(a ? class_a : class_b);
        out.informative.push_back(leaf);
      } else {
        feature_of.push_back({3 + static_cast<std::size_t>(rng.below(kFeatures - 3))});
        cls.push_back(-1);
        neutral.push_back(ids.size() - 1);
      }
    }
  }
  for (std::size_t i : neutral) {
    if (!rng.bernoulli(0.3)) continue;
    const std::size_t j = neutral[rng.below(neutral.size())];
    if (ids[i].substr(0, 6) != ids[j].substr(0, 6)) edges.push_back({ids[i], ids[j]});
  }

  out.graph.sg = graph::SummaryGraph(ids, std::move(edges));
  std::vector<CsrMatrix::Triplet> t;
  out.labels.assign(ids.size(), -1);
  out.graph.classes.assign(ids.size(), -1);
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const std::size_t row = out.graph.sg.require(ids[k]);
    for (std::size_t f : feature_of[k]) {
      t.push_back({static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(f), 1.0});
    }
    out.labels[row] = cls[k];
    out.graph.classes[row] = cls[k];
  }
  out.graph.x = CsrMatrix::from_triplets(ids.size(), kFeatures, std::move(t));
  return out;
}

std::vector<std::string> class_keywords(int cls) {
  const auto& words = kClassWords.at(static_cast<std::size_t>(cls));
  return {words.begin(), words.end()};
}

PlantedCorpus planted_corpus(std::size_t n, std::uint64_t seed, int tokens_per_doc, double signal) {
  Rng rng(seed);
  int total_weight = 0;
  for (int w : kClassWeights) total_weight += w;
  PlantedCorpus out;
  for (std::size_t i = 0; i < n; ++i) {
    auto draw = static_cast<int>(rng.below(static_cast<std::uint64_t>(total_weight)));
    int cls = 0;
    while (draw >= kClassWeights[static_cast<std::size_t>(cls)]) draw -= kClassWeights[static_cast<std::size_t>(cls++)];
    std::string text;
    for (int k = 0; k < tokens_per_doc; ++k) {
      const char* word = rng.bernoulli(signal)
                             ? kClassWords[static_cast<std::size_t>(cls)][rng.below(6)]
                             : kBackground[rng.below(kBackground.size())];
      if (!text.empty()) text += ' ';
      text += word;
    }
    out.ids.push_back(padded("c", i));
    out.texts.push_back(std::move(text));
    out.classes.push_back(cls);
  }
  return out;
}

}  // namespace sdg::synthetic
