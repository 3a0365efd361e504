// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sdg/graph_store.hpp"
#include "sdg/matrix.hpp"

// Planted-signal generators shared by tests, benchmarks and the fixture tool.
namespace sdg::synthetic {

struct PlantedGraph {
  graph::SummaryGraph sg;
  CsrMatrix x;               // one row per node, summary-graph order
  std::vector<int> classes;  // class index per node
};

// Two blocks of `per_block` nodes with edge probabilities p_in and p_out.
// Features 0..d/2-1 fire mostly in block 0, the rest mostly in block 1.
// Block 0 nodes get class_a, block 1 nodes class_b.
PlantedGraph two_block_graph(std::size_t per_block, double p_in, double p_out, std::size_t n_features,
                             std::uint64_t seed, int class_a = 1, int class_b = 5);

struct PlantedStars {
  PlantedGraph graph;
  std::vector<std::string> centers;
  std::vector<std::string> informative;  // per center, the leaf that decides its class
  std::vector<int> labels;               // training labels per node, -1 unlabeled
};

// Stars whose center class is copied from exactly one leaf's feature. Leaves
// of different stars are linked at random so explanations see distractors.
// Features: 0 marks centers, 1 and 2 carry the two classes, 3.. are noise.
PlantedStars informative_neighbor_graph(std::size_t stars, std::size_t leaves, std::uint64_t seed,
                                        int class_a = 1, int class_b = 5);

struct PlantedCorpus {
  std::vector<std::string> ids;
  std::vector<std::string> texts;
  std::vector<int> classes;
};

// Documents over a shared background vocabulary plus a small keyword pool
// per class. Each token is drawn from the document's class pool with
// probability `signal`, otherwise from the background.
PlantedCorpus planted_corpus(std::size_t n, std::uint64_t seed, int tokens_per_doc = 60, double signal = 0.25);

// Keyword pool of a class in planted_corpus.
std::vector<std::string> class_keywords(int cls);

// --- Fixture files ----------------------------------------------------------

struct FixtureOptions {
  std::size_t companies = 30;
  std::uint64_t seed = 2021;
  std::vector<int> sdgs = {3, 7, 13};
  int news_year = 2021;
};

// Writes a fixture directory: companies.jsonl, reports/, wikipedia/, news/,
// kg.tsv and labels.csv. Companies belong to six sectors whose SDG scores,
// report sentences, headlines and graph neighborhoods agree, so every model
// has signal to find. The last company has no graph entity.
void write_company_fixture(const std::filesystem::path& dir, const FixtureOptions& options = {});

struct KgShape {
  std::size_t entities = 74840;
  std::size_t edges = 160994;
  std::size_t relations = 610;
};

// Connected edge list with exactly the requested counts and distinct
// triples, written to dir/kg.tsv, plus dir/kg.manifest.json holding the
// counts and the file's FNV-1a hash. Requires entities >= 2,
// relations <= edges and entities - 1 <= edges.
void write_shaped_kg(const std::filesystem::path& dir, const KgShape& shape, std::uint64_t seed);

}  // namespace sdg::synthetic
