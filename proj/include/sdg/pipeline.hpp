// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sdg/explain.hpp"
#include "sdg/models/brf.hpp"
#include "sdg/models/gcn.hpp"
#include "sdg/models/rgcn.hpp"

// Stage orchestration. Every stage reads the files written by earlier stages
// under the output directory, writes its own artifacts there and leaves a
// `<stage>.manifest.json` beside them. Output layout:
//
//   graph/subgraph.tsv  graph/summary.tsv  graph/degree.csv  graph/stats.json
//   text/evidence.jsonl  text/news.jsonl
//   features/vocab.tsv  features/rows.jsonl  features/labels.csv  features/splits.json
//   models/sdgNN_<kind>.json
//   predictions.csv
//   reports/report.json  reports/report.md
//   results/results.csv  results/results.txt  results/per_sdg.json
namespace sdg::pipeline {

struct RelevanceConfig {
  std::size_t top_k = 5;
  double min_score = 0.0;  // evidence must score above this
  double dedup_threshold = 0.55;
  std::string scorer = "tfidf";
  std::string gate = "lexical";
  double gate_threshold = 0.2;
  std::vector<std::string> keep_verdicts = {"entailed", "neutral"};
  int news_year = 2021;
  std::size_t news_n = 5;
};

struct FeatureConfig {
  int min_df = 2;
  std::size_t max_size = 50000;
  bool include_news = true;
};

struct ExplainConfig {
  explain::LimeConfig lime;
  explain::GnnExplainConfig gnn;
  std::vector<std::string> companies;  // empty: every company
};

struct PipelineConfig {
  std::filesystem::path fixture_dir;  // companies.jsonl, reports/, wikipedia/, news/
  std::filesystem::path knowledge_graph;
  std::filesystem::path labels;
  std::filesystem::path keywords_dir;
  std::filesystem::path output_dir;
  std::vector<int> sdgs;
  std::uint64_t seed = 0;
  RelevanceConfig relevance;
  FeatureConfig features;
  double test_fraction = 0.2;
  std::vector<std::string> models = {"brf", "gcn", "rgcn"};
  models::BrfConfig brf;
  models::GcnConfig gcn;
  models::RgcnConfig rgcn;
  int clusters = 50;
  ExplainConfig explain;
  int threads = 0;

  // FNV-1a of the canonical JSON form.
  std::uint64_t hash() const;
};

// Paths are resolved against `base_dir` (the config file's directory).
// SDG_FIXTURE_DIR replaces fixture_dir when set. Throws
// sdg::Error(kConfig) for malformed or missing fields (including "seed") and
// sdg::Error(kConfigPath) for a referenced input path that does not exist.
PipelineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const PipelineConfig& c);
// Rechecks that every input path exists.
void validate_paths(const PipelineConfig& c);

void extract_graph(const PipelineConfig& c);
void summarize_graph(const PipelineConfig& c);
void filter_text(const PipelineConfig& c);
void featurize(const PipelineConfig& c);
void train(const PipelineConfig& c);
void predict(const PipelineConfig& c);

struct ExplainRequest {
  std::optional<std::string> company;
  std::optional<int> sdg;
  std::optional<std::filesystem::path> model;  // one model file instead of all trained ones
};
void explain(const PipelineConfig& c, const ExplainRequest& request = {});
void evaluate(const PipelineConfig& c);

// Every stage in order.
void run_all(const PipelineConfig& c);

inline constexpr const char* kPredictionsHeader =
    "company_id,sdg,model,predicted_score,prob_-3,prob_-2,prob_-1,prob_0,prob_1,prob_2,prob_3";

}  // namespace sdg::pipeline
