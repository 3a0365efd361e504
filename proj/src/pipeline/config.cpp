// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <fstream>
#include <set>

#include "sdg/common.hpp"
#include "sdg/error.hpp"
#include "sdg/hash.hpp"
#include "sdg/ingest.hpp"
#include "sdg/pipeline.hpp"
#include "sdg/relevance.hpp"

namespace sdg::pipeline {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void only_keys(const json& obj, std::string_view where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw Error(ErrorKind::kConfig, std::string(where) + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw Error(ErrorKind::kConfig, "unknown field " + std::string(where) + "." + key);
  }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

fs::path resolve(const fs::path& base, const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::kConfig, std::string("missing field ") + key);
  const fs::path p = j.at(key).get<std::string>();
  return (p.is_absolute() ? p : base / p).lexically_normal();
}

void require_exists(const fs::path& p, const char* what) {
  if (!fs::exists(p)) throw Error(ErrorKind::kConfigPath, std::string(what) + " does not exist: " + p.string());
}

}  // namespace

PipelineConfig config_from_json(const json& j, const fs::path& base_dir) {
  PipelineConfig c;
  try {
    only_keys(j, "config",
              {"fixture_dir", "knowledge_graph", "labels", "keywords_dir", "output_dir", "sdgs", "seed",
               "test_fraction", "threads", "relevance", "features", "models", "explain"});
    c.fixture_dir = ingest::fixture_root(resolve(base_dir, j, "fixture_dir"));
    c.knowledge_graph = resolve(base_dir, j, "knowledge_graph");
    c.labels = resolve(base_dir, j, "labels");
    c.keywords_dir = resolve(base_dir, j, "keywords_dir");
    c.output_dir = resolve(base_dir, j, "output_dir");
    if (!j.contains("seed")) throw Error(ErrorKind::kConfig, "missing field seed (seeds must be explicit)");
    c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("sdgs")) {
      c.sdgs = j.at("sdgs").get<std::vector<int>>();
    } else {
      c.sdgs.assign(kSupportedSdgs.begin(), kSupportedSdgs.end());
    }
    read(j, "test_fraction", c.test_fraction);
    read(j, "threads", c.threads);

    if (j.contains("relevance")) {
      const auto& r = j.at("relevance");
      only_keys(r, "relevance",
                {"top_k", "min_score", "dedup_threshold", "scorer", "gate", "gate_threshold", "keep_verdicts", "news_year",
                 "news_n"});
      read(r, "top_k", c.relevance.top_k);
      read(r, "min_score", c.relevance.min_score);
      read(r, "dedup_threshold", c.relevance.dedup_threshold);
      read(r, "scorer", c.relevance.scorer);
      read(r, "gate", c.relevance.gate);
      read(r, "gate_threshold", c.relevance.gate_threshold);
      read(r, "keep_verdicts", c.relevance.keep_verdicts);
      read(r, "news_year", c.relevance.news_year);
      read(r, "news_n", c.relevance.news_n);
    }
    if (j.contains("features")) {
      const auto& f = j.at("features");
      only_keys(f, "features", {"min_df", "max_size", "include_news"});
      read(f, "min_df", c.features.min_df);
      read(f, "max_size", c.features.max_size);
      read(f, "include_news", c.features.include_news);
    }
    if (j.contains("models")) {
      const auto& m = j.at("models");
      only_keys(m, "models", {"kinds", "brf", "gcn", "rgcn", "clusters"});
      read(m, "kinds", c.models);
      read(m, "clusters", c.clusters);
      if (m.contains("brf")) {
        const auto& b = m.at("brf");
        only_keys(b, "models.brf", {"n_trees", "max_depth"});
        read(b, "n_trees", c.brf.n_trees);
        read(b, "max_depth", c.brf.max_depth);
      }
      if (m.contains("gcn")) {
        const auto& g = m.at("gcn");
        only_keys(g, "models.gcn", {"hidden", "epochs", "learning_rate"});
        read(g, "hidden", c.gcn.hidden);
        read(g, "epochs", c.gcn.epochs);
        read(g, "learning_rate", c.gcn.adam.learning_rate);
      }
      if (m.contains("rgcn")) {
        const auto& g = m.at("rgcn");
        only_keys(g, "models.rgcn", {"hidden", "epochs", "learning_rate", "min_relation_count", "embedding_scale"});
        read(g, "hidden", c.rgcn.hidden);
        read(g, "epochs", c.rgcn.epochs);
        read(g, "learning_rate", c.rgcn.adam.learning_rate);
        read(g, "min_relation_count", c.rgcn.min_relation_count);
        read(g, "embedding_scale", c.rgcn.embedding_scale);
      }
    }
    if (j.contains("explain")) {
      const auto& e = j.at("explain");
      only_keys(e, "explain", {"lime_samples", "top_terms", "kernel_width", "gnn_steps", "sparsity", "companies"});
      read(e, "lime_samples", c.explain.lime.n_samples);
      read(e, "top_terms", c.explain.lime.top_m);
      read(e, "kernel_width", c.explain.lime.kernel_width);
      read(e, "gnn_steps", c.explain.gnn.steps);
      read(e, "sparsity", c.explain.gnn.sparsity);
      read(e, "companies", c.explain.companies);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig, std::string("config: ") + e.what());
  }

  for (int sdg : c.sdgs) {
    if (!is_supported_sdg(sdg)) throw Error(ErrorKind::kConfig, "unsupported SDG " + std::to_string(sdg));
  }
  if (c.sdgs.empty()) throw Error(ErrorKind::kConfig, "sdgs must not be empty");
  if (!(c.test_fraction > 0.0 && c.test_fraction < 1.0)) throw Error(ErrorKind::kConfig, "test_fraction must be in (0, 1)");
  if (c.relevance.scorer != "tfidf") throw Error(ErrorKind::kConfig, "unknown scorer " + c.relevance.scorer);
  if (c.relevance.gate != "lexical") throw Error(ErrorKind::kConfig, "unknown gate " + c.relevance.gate);
  for (const auto& v : c.relevance.keep_verdicts) {
    if (!relevance::parse_entailment(v)) throw Error(ErrorKind::kConfig, "unknown verdict " + v);
  }
  const std::set<std::string> kinds = {"brf", "gcn", "rgcn", "cluster"};
  for (const auto& k : c.models) {
    if (!kinds.count(k)) throw Error(ErrorKind::kConfig, "unknown model kind " + k);
  }
  if (std::find(c.models.begin(), c.models.end(), "cluster") != c.models.end() &&
      std::find(c.models.begin(), c.models.end(), "gcn") == c.models.end()) {
    throw Error(ErrorKind::kConfig, "model kind cluster needs gcn as its fallback");
  }
  if (c.clusters < 1) throw Error(ErrorKind::kConfig, "clusters must be >= 1");
  if (c.brf.n_trees < 1 || c.brf.max_depth < 1 || c.gcn.hidden < 1 || c.gcn.epochs < 0 || c.rgcn.hidden < 1 ||
      c.rgcn.epochs < 0 || c.features.min_df < 1 || c.features.max_size < 1) {
    throw Error(ErrorKind::kConfig, "model or feature parameter out of range");
  }
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::kConfig, what);
  };
  require(std::set<int>(c.sdgs.begin(), c.sdgs.end()).size() == c.sdgs.size(), "sdgs must be unique");
  require(std::set<std::string>(c.models.begin(), c.models.end()).size() == c.models.size() && !c.models.empty(),
          "models.kinds must be non-empty and unique");
  require(c.threads >= 0, "threads must be >= 0");
  require(c.relevance.top_k >= 1, "relevance.top_k must be >= 1");
  require(c.relevance.dedup_threshold > 0.0 && c.relevance.dedup_threshold <= 1.0,
          "relevance.dedup_threshold must be in (0, 1]");
  require(c.relevance.gate_threshold >= 0.0 && c.relevance.gate_threshold <= 1.0,
          "relevance.gate_threshold must be in [0, 1]");
  require(c.gcn.adam.learning_rate > 0.0 && c.rgcn.adam.learning_rate > 0.0, "learning rates must be positive");
  require(c.rgcn.min_relation_count >= 1 && c.rgcn.embedding_scale >= 0.0, "rgcn parameter out of range");
  require(c.explain.lime.n_samples >= 10 && c.explain.lime.top_m >= 1 && c.explain.lime.kernel_width > 0.0,
          "explain LIME parameter out of range");
  require(c.explain.gnn.steps >= 0 && c.explain.gnn.sparsity >= 0.0, "explain GNN parameter out of range");
  c.brf.threads = c.threads;
  validate_paths(c);
  return c;
}

void validate_paths(const PipelineConfig& c) {
  require_exists(c.fixture_dir, "fixture_dir");
  require_exists(c.fixture_dir / "companies.jsonl", "fixture companies file");
  require_exists(c.knowledge_graph, "knowledge_graph");
  require_exists(c.labels, "labels");
  require_exists(c.keywords_dir, "keywords_dir");
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfigPath, "config file not found: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig, "config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

json to_json(const PipelineConfig& c) {
  return {{"fixture_dir", c.fixture_dir.string()},
          {"knowledge_graph", c.knowledge_graph.string()},
          {"labels", c.labels.string()},
          {"keywords_dir", c.keywords_dir.string()},
          {"output_dir", c.output_dir.string()},
          {"sdgs", c.sdgs},
          {"seed", c.seed},
          {"test_fraction", c.test_fraction},
          {"threads", c.threads},
          {"relevance",
           {{"top_k", c.relevance.top_k},
            {"min_score", c.relevance.min_score},
            {"dedup_threshold", c.relevance.dedup_threshold},
            {"scorer", c.relevance.scorer},
            {"gate", c.relevance.gate},
            {"gate_threshold", c.relevance.gate_threshold},
            {"keep_verdicts", c.relevance.keep_verdicts},
            {"news_year", c.relevance.news_year},
            {"news_n", c.relevance.news_n}}},
          {"features",
           {{"min_df", c.features.min_df}, {"max_size", c.features.max_size}, {"include_news", c.features.include_news}}},
          {"models",
           {{"kinds", c.models},
            {"clusters", c.clusters},
            {"brf", {{"n_trees", c.brf.n_trees}, {"max_depth", c.brf.max_depth}}},
            {"gcn", {{"hidden", c.gcn.hidden}, {"epochs", c.gcn.epochs}, {"learning_rate", c.gcn.adam.learning_rate}}},
            {"rgcn",
             {{"hidden", c.rgcn.hidden},
              {"epochs", c.rgcn.epochs},
              {"learning_rate", c.rgcn.adam.learning_rate},
              {"min_relation_count", c.rgcn.min_relation_count},
              {"embedding_scale", c.rgcn.embedding_scale}}}}},
          {"explain",
           {{"lime_samples", c.explain.lime.n_samples},
            {"top_terms", c.explain.lime.top_m},
            {"kernel_width", c.explain.lime.kernel_width},
            {"gnn_steps", c.explain.gnn.steps},
            {"sparsity", c.explain.gnn.sparsity},
            {"companies", c.explain.companies}}}};
}

std::uint64_t PipelineConfig::hash() const {
  json j = to_json(*this);
  j.erase("threads");  // results do not depend on it
  return fnv1a64(j.dump());
}

}  // namespace sdg::pipeline
