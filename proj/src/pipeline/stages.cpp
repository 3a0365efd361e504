// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "sdg/error.hpp"
#include "sdg/eval.hpp"
#include "sdg/features.hpp"
#include "sdg/graph_store.hpp"
#include "sdg/hash.hpp"
#include "sdg/ingest.hpp"
#include "sdg/models/cluster.hpp"
#include "sdg/pipeline.hpp"
#include "sdg/relevance.hpp"
#include "sdg/rng.hpp"
#include "sdg/version.hpp"

namespace sdg::pipeline {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Seed streams per purpose; model seeds add sdg * 16 + kind.
constexpr std::uint64_t kSplitStream = 1000;
constexpr std::uint64_t kModelStream = 2000;
constexpr std::uint64_t kExplainStream = 3000;

void log(const std::string& msg) { std::cerr << "sdgscore: " << msg << "\n"; }

fs::path under(const PipelineConfig& c, const std::string& rel) { return c.output_dir / rel; }

void ensure_parent(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p.parent_path(), ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create " + p.parent_path().string() + ": " + ec.message());
}

void write_text_file(const fs::path& p, const std::string& content) {
  ensure_parent(p);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + p.string());
}

std::string read_text_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "missing stage input " + p.string() + " (run the earlier stage first)");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

template <class Fn>
void write_stream(const fs::path& p, Fn&& fn) {
  std::ostringstream s;
  fn(s);
  write_text_file(p, s.str());
}

std::string display_path(const PipelineConfig& c, const fs::path& p) {
  const fs::path rel = p.lexically_relative(c.output_dir);
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return p.generic_string();
}

struct StageJournal {
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;
  json stats = json::object();
};

void write_manifest(const PipelineConfig& c, const std::string& stage, const fs::path& dir, const StageJournal& j) {
  auto entries = [&](const std::vector<fs::path>& paths) {
    json arr = json::array();
    for (const auto& p : paths) {
      const std::uint64_t h = fs::is_directory(p) ? 0 : fnv1a64_file(p);
      arr.push_back({{"path", display_path(c, p)}, {"fnv1a64", to_hex(h)}});
    }
    return arr;
  };
  json m = {{"stage", stage},
            {"version", kVersion},
            {"config_hash", to_hex(c.hash())},
            {"seed", c.seed},
            {"inputs", entries(j.inputs)},
            {"outputs", entries(j.outputs)}};
  if (!j.stats.empty()) m["stats"] = j.stats;
  write_text_file(dir / (stage + ".manifest.json"), m.dump(2) + "\n");
}

std::vector<ingest::Company> companies(const PipelineConfig& c) {
  auto list = ingest::load_companies(c.fixture_dir / "companies.jsonl");
  std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < list.size(); ++i) {
    if (list[i].id == list[i - 1].id) throw Error(ErrorKind::kParse, "duplicate company id " + list[i].id);
  }
  return list;
}

std::vector<std::string> company_ids(const std::vector<ingest::Company>& list) {
  std::vector<std::string> ids;
  for (const auto& co : list) ids.push_back(co.id);
  return ids;
}

// Entity id -> company id for companies mapped into the graph.
std::map<std::string, std::string> entity_to_company(const std::vector<ingest::Company>& list,
                                                     const graph::KnowledgeGraph& kg) {
  std::map<std::string, std::string> out;
  for (const auto& co : list) {
    if (!co.kg_entity || !kg.find(*co.kg_entity)) continue;
    auto [it, inserted] = out.emplace(*co.kg_entity, co.id);
    if (!inserted) {
      throw Error(ErrorKind::kInvalidArgument,
                  "companies " + it->second + " and " + co.id + " map to the same entity " + *co.kg_entity);
    }
  }
  return out;
}

std::string sdg_tag(int sdg) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "sdg%02d", sdg);
  return buf;
}

fs::path model_path(const PipelineConfig& c, int sdg, const std::string& kind) {
  return under(c, "models/" + sdg_tag(sdg) + "_" + kind + ".json");
}

std::uint64_t model_seed(const PipelineConfig& c, int sdg, int kind) {
  return derive_seed(c.seed, kModelStream + static_cast<std::uint64_t>(sdg) * 16 + static_cast<std::uint64_t>(kind));
}

json load_json(const fs::path& p) {
  const std::string s = read_text_file(p);
  try {
    return json::parse(s);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, p.string() + ": " + e.what());
  }
}

features::FeatureMatrix load_features(const PipelineConfig& c) {
  return features::read_feature_matrix(under(c, "features/vocab.tsv"), under(c, "features/rows.jsonl"));
}

struct Splits {
  std::map<int, features::Split> by_sdg;
};

Splits load_splits(const PipelineConfig& c) {
  const json j = load_json(under(c, "features/splits.json"));
  Splits s;
  try {
    for (const auto& [key, v] : j.items()) {
      features::Split sp;
      sp.train = v.at("train").get<std::vector<std::string>>();
      sp.test = v.at("test").get<std::vector<std::string>>();
      s.by_sdg[std::stoi(key)] = std::move(sp);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("splits.json: ") + e.what());
  }
  return s;
}

const features::LabelVector& labels_for(const std::map<int, features::LabelVector>& all, int sdg) {
  auto it = all.find(sdg);
  if (it == all.end()) throw Error(ErrorKind::kInvalidArgument, "no labels for SDG " + std::to_string(sdg));
  return it->second;
}

// The extracted subgraph plus an isolated entity for every company the graph
// does not cover, so graph models see every company.
struct CompanyGraph {
  graph::KnowledgeGraph kg;
  std::vector<std::string> entities;  // parallels the sorted company list
};

CompanyGraph company_graph(const PipelineConfig& c, const std::vector<ingest::Company>& list) {
  const auto sub = graph::load_edge_list(under(c, "graph/subgraph.tsv"));
  graph::KnowledgeGraph::Builder b;
  for (const auto& e : sub.entities()) b.add_entity(e.id, e.label);
  for (const auto& e : sub.edges()) b.add_edge(sub.entity(e.subject).id, sub.relation(e.relation), sub.entity(e.object).id);
  CompanyGraph out;
  for (const auto& co : list) {
    std::string id = co.kg_entity && sub.find(*co.kg_entity) ? *co.kg_entity : "company:" + co.id;
    b.add_entity(id, co.name, true);
    out.entities.push_back(std::move(id));
  }
  out.kg = std::move(b).build();
  return out;
}

ProbabilityVector one_hot(int cls) {
  ProbabilityVector p{};
  p[static_cast<std::size_t>(cls)] = 1.0;
  return p;
}

std::string format_prob(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct PredictionRow {
  std::string company_id;
  int sdg = 0;
  std::string model;
  int cls = 0;
  ProbabilityVector probs{};
};

std::vector<PredictionRow> read_predictions(const fs::path& p) {
  std::istringstream in(read_text_file(p));
  std::string line;
  std::getline(in, line);
  if (line != kPredictionsHeader) throw Error(ErrorKind::kParse, p.string() + ": unexpected header");
  std::vector<PredictionRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 11) throw Error(ErrorKind::kParse, p.string() + ": line " + std::to_string(lineno) + " has " + std::to_string(f.size()) + " fields");
    try {
      PredictionRow r;
      r.company_id = f[0];
      r.sdg = std::stoi(f[1]);
      r.model = f[2];
      r.cls = encode_score(std::stoi(f[3]));
      for (int k = 0; k < kNumClasses; ++k) r.probs[k] = std::stod(f[4 + static_cast<std::size_t>(k)]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::kParse, p.string() + ": bad number on line " + std::to_string(lineno));
    }
  }
  return rows;
}

// company id -> values of `field`, from a JSONL file with company_id keys.
std::map<std::string, std::vector<std::string>> texts_by_company(const fs::path& p, const char* field) {
  std::map<std::string, std::vector<std::string>> out;
  std::istringstream in(read_text_file(p));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      out[j.at("company_id").get<std::string>()].push_back(j.at(field).get<std::string>());
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kParse, p.string() + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

// --- graph ------------------------------------------------------------------

void extract_graph(const PipelineConfig& c) {
  const auto list = companies(c);
  const auto kg = graph::load_edge_list(c.knowledge_graph);
  std::vector<std::string> seeds;
  for (const auto& co : list) {
    if (!co.kg_entity) {
      log("company " + co.id + " has no knowledge-graph entity");
    } else if (!kg.find(*co.kg_entity)) {
      log("entity " + *co.kg_entity + " of company " + co.id + " is not in the knowledge graph");
    } else {
      seeds.push_back(*co.kg_entity);
    }
  }
  const auto sub = graph::extract_subgraph(kg, seeds);
  const fs::path out = under(c, "graph/subgraph.tsv");
  write_stream(out, [&](std::ostream& s) { graph::write_edge_list(sub, s); });
  StageJournal j;
  j.inputs = {c.knowledge_graph, c.fixture_dir / "companies.jsonl"};
  j.outputs = {out};
  j.stats = {{"input_entities", kg.entity_count()},
             {"input_edges", kg.edge_count()},
             {"input_relations", kg.relation_count()},
             {"seeds", seeds.size()},
             {"subgraph_entities", sub.entity_count()},
             {"subgraph_edges", sub.edge_count()},
             {"subgraph_relations", sub.relation_count()}};
  write_manifest(c, "extract-graph", out.parent_path(), j);
  log("extract-graph: " + std::to_string(sub.entity_count()) + " entities, " + std::to_string(sub.edge_count()) +
      " edges around " + std::to_string(seeds.size()) + " companies");
}

void summarize_graph(const PipelineConfig& c) {
  const auto list = companies(c);
  const fs::path in = under(c, "graph/subgraph.tsv");
  const auto sub = graph::load_edge_list(in);
  const auto mapping = entity_to_company(list, sub);
  std::vector<std::string> entities;
  for (const auto& [e, id] : mapping) entities.push_back(e);
  const auto by_entity = graph::build_summary_graph(sub, entities);
  std::vector<std::pair<std::string, std::string>> edges;
  for (auto [a, b] : by_entity.edges()) {
    edges.push_back({mapping.at(std::string(by_entity.nodes()[a])), mapping.at(std::string(by_entity.nodes()[b]))});
  }
  const graph::SummaryGraph sg(company_ids(list), std::move(edges));

  const fs::path summary = under(c, "graph/summary.tsv");
  const fs::path degree = under(c, "graph/degree.csv");
  const fs::path stats = under(c, "graph/stats.json");
  write_stream(summary, [&](std::ostream& s) { graph::write_summary_tsv(sg, s); });
  write_stream(degree, [&](std::ostream& s) { graph::write_degree_csv(graph::degree_histogram(sg), s); });
  const auto reach = entities.size() >= 2 ? graph::pair_reachability(sub, entities, 4) : std::vector<double>(4, 0.0);
  json st = {{"companies", sg.node_count()},
             {"mapped_companies", entities.size()},
             {"summary_edges", sg.edge_count()},
             {"subgraph_entities", sub.entity_count()},
             {"subgraph_edges", sub.edge_count()},
             {"subgraph_relations", sub.relation_count()},
             {"pair_reachability", reach}};
  write_text_file(stats, st.dump(2) + "\n");
  StageJournal j;
  j.inputs = {in, c.fixture_dir / "companies.jsonl"};
  j.outputs = {summary, degree, stats};
  write_manifest(c, "summarize-graph", summary.parent_path(), j);
  log("summarize-graph: " + std::to_string(sg.node_count()) + " companies, " + std::to_string(sg.edge_count()) + " edges");
}

// --- text -------------------------------------------------------------------

void filter_text(const PipelineConfig& c) {
  const auto list = companies(c);
  const auto providers = ingest::fixture_providers(c.fixture_dir);
  std::vector<relevance::SdgQuery> queries;
  for (int sdg : c.sdgs) queries.push_back(relevance::load_query(c.keywords_dir, sdg));
  const relevance::TfidfScorer scorer;
  const relevance::LexicalGate gate(c.relevance.gate_threshold);
  std::set<relevance::Entailment> keep;
  for (const auto& v : c.relevance.keep_verdicts) keep.insert(*relevance::parse_entailment(v));

  std::vector<relevance::Evidence> evidence;
  std::ostringstream news, descriptions;
  for (const auto& co : list) {
    auto docs = providers.search->find_reports(co);
    if (auto wiki = providers.wiki->description(co)) {
      descriptions << json({{"company_id", co.id}, {"text", wiki->text}}).dump() << "\n";
      docs.push_back(std::move(*wiki));
    }
    for (const auto& q : queries) {
      for (auto& e : relevance::filter_evidence(co.id, docs, q, scorer, gate, c.relevance.top_k)) {
        if (keep.count(e.verdict.label) && e.score > c.relevance.min_score) evidence.push_back(std::move(e));
      }
    }
    const auto articles = providers.news->news_for(co, c.relevance.news_year);
    const auto chosen = relevance::select_influential(articles, c.relevance.news_n, c.relevance.dedup_threshold);
    auto emit = [&](const std::vector<ingest::NewsArticle>& group, const char* kind) {
      for (std::size_t r = 0; r < group.size(); ++r) {
        const auto& a = group[r];
        json line = {{"company_id", co.id},
                     {"kind", kind},
                     {"rank", r + 1},
                     {"headline", a.headline},
                     {"score", relevance::aggregate_news_score(a)},
                     {"published", a.published.to_string()}};
        news << line.dump() << "\n";
      }
    };
    emit(chosen.top, "top");
    emit(chosen.bottom, "bottom");
  }
  const fs::path ev = under(c, "text/evidence.jsonl");
  const fs::path nw = under(c, "text/news.jsonl");
  const fs::path desc = under(c, "text/descriptions.jsonl");
  write_stream(ev, [&](std::ostream& s) { relevance::write_evidence_jsonl(evidence, s); });
  write_text_file(nw, news.str());
  write_text_file(desc, descriptions.str());
  StageJournal j;
  j.inputs = {c.fixture_dir / "companies.jsonl", c.keywords_dir};
  j.outputs = {ev, nw, desc};
  j.stats = {{"evidence_rows", evidence.size()}};
  write_manifest(c, "filter-text", ev.parent_path(), j);
  log("filter-text: " + std::to_string(evidence.size()) + " evidence sentences");
}

// --- features ---------------------------------------------------------------

void featurize(const PipelineConfig& c) {
  const auto list = companies(c);
  const fs::path ev_path = under(c, "text/evidence.jsonl");
  const fs::path news_path = under(c, "text/news.jsonl");
  const fs::path desc_path = under(c, "text/descriptions.jsonl");
  const auto evidence = relevance::read_evidence_jsonl(ev_path);
  const auto descriptions = texts_by_company(desc_path, "text");
  const auto news = c.features.include_news ? texts_by_company(news_path, "headline")
                                            : std::map<std::string, std::vector<std::string>>{};

  // Evidence sentences once each, the full description, then headlines.
  std::map<std::string, std::vector<std::string>> texts;
  std::map<std::string, std::set<std::string>> seen;
  for (const auto& e : evidence) {
    if (seen[e.company_id].insert(e.sentence).second) texts[e.company_id].push_back(e.sentence);
  }
  for (const auto& [id, d] : descriptions) {
    for (const auto& t : d) texts[id].push_back(t);
  }
  for (const auto& [id, heads] : news) {
    for (const auto& h : heads) texts[id].push_back(h);
  }
  std::vector<std::string> docs;
  for (const auto& co : list) {
    std::string joined;
    for (const auto& t : texts[co.id]) joined += t + "\n";
    docs.push_back(std::move(joined));
  }
  features::FeatureMatrix fm;
  fm.vocab = features::build_vocabulary(docs, c.features.min_df, c.features.max_size);
  for (std::size_t i = 0; i < list.size(); ++i) {
    fm.row_ids.push_back(list[i].id);
    fm.rows.push_back(features::featurize(fm.vocab, docs[i]));
  }

  const auto all_labels = features::read_labels_csv(c.labels);
  const std::set<std::string> known(fm.row_ids.begin(), fm.row_ids.end());
  std::vector<features::LabelVector> kept;
  json splits = json::object();
  for (int sdg : c.sdgs) {
    const auto& y = labels_for(all_labels, sdg);
    for (const auto& [id, cls] : y.values) {
      if (!known.count(id)) throw Error(ErrorKind::kNotFound, "labels name unknown company " + id);
    }
    kept.push_back(y);
    const auto split = features::stratified_split(y, c.test_fraction, derive_seed(c.seed, kSplitStream + static_cast<std::uint64_t>(sdg)));
    for (const auto& w : split.warnings) log(w);
    splits[std::to_string(sdg)] = {{"train", split.train}, {"test", split.test}};
  }

  const fs::path vocab = under(c, "features/vocab.tsv");
  const fs::path rows = under(c, "features/rows.jsonl");
  const fs::path labels = under(c, "features/labels.csv");
  const fs::path split_path = under(c, "features/splits.json");
  write_stream(vocab, [&](std::ostream& s) { features::write_vocabulary(fm.vocab, s); });
  write_stream(rows, [&](std::ostream& s) { features::write_rows_jsonl(fm, s); });
  write_stream(labels, [&](std::ostream& s) { features::write_labels_csv(kept, s); });
  write_text_file(split_path, splits.dump(2) + "\n");
  StageJournal j;
  j.inputs = {ev_path, desc_path, news_path, c.labels};
  j.outputs = {vocab, rows, labels, split_path};
  j.stats = {{"vocabulary", fm.vocab.size()}, {"companies", fm.row_count()}};
  write_manifest(c, "featurize", vocab.parent_path(), j);
  log("featurize: " + std::to_string(fm.vocab.size()) + " terms over " + std::to_string(fm.row_count()) + " companies");
}

// --- models -----------------------------------------------------------------

void train(const PipelineConfig& c) {
  const auto list = companies(c);
  const auto ids = company_ids(list);
  const auto X = load_features(c);
  const auto labels = features::read_labels_csv(under(c, "features/labels.csv"));
  const auto splits = load_splits(c);
  const auto has = [&](const char* k) { return std::find(c.models.begin(), c.models.end(), k) != c.models.end(); };

  std::optional<graph::SummaryGraph> sg;
  if (has("gcn") || has("cluster")) {
    std::istringstream in(read_text_file(under(c, "graph/summary.tsv")));
    sg = graph::read_summary_tsv(in, "graph/summary.tsv");
  }
  std::optional<models::RelationalGraph> rg;
  std::optional<CsrMatrix> x_companies;
  if (has("rgcn")) {
    const auto cg = company_graph(c, list);
    rg = models::build_relational_graph(cg.kg, cg.entities, c.rgcn.min_relation_count);
    x_companies = models::feature_rows(X, ids);
  }

  StageJournal j;
  j.inputs = {under(c, "features/vocab.tsv"), under(c, "features/rows.jsonl"), under(c, "features/labels.csv"),
              under(c, "features/splits.json")};
  if (sg) j.inputs.push_back(under(c, "graph/summary.tsv"));
  if (rg) j.inputs.push_back(under(c, "graph/subgraph.tsv"));

  for (int sdg : c.sdgs) {
    const auto& y = labels_for(labels, sdg);
    auto sp = splits.by_sdg.find(sdg);
    if (sp == splits.by_sdg.end()) throw Error(ErrorKind::kInvalidArgument, "no split for SDG " + std::to_string(sdg));
    const auto& train_ids = sp->second.train;
    std::optional<models::GcnModel> gcn;
    for (const auto& kind : c.models) {
      json out;
      if (kind == "brf") {
        models::BrfConfig cfg = c.brf;
        cfg.seed = model_seed(c, sdg, 1);
        out = models::to_json(models::train_brf(X, y, train_ids, cfg));
      } else if (kind == "gcn") {
        models::GcnConfig cfg = c.gcn;
        cfg.seed = model_seed(c, sdg, 2);
        gcn = models::train_gcn(*sg, X, y, train_ids, cfg);
        out = models::to_json(*gcn);
      } else if (kind == "rgcn") {
        models::RgcnConfig cfg = c.rgcn;
        cfg.seed = model_seed(c, sdg, 3);
        std::vector<int> company_labels(ids.size(), -1);
        const std::set<std::string> train_set(train_ids.begin(), train_ids.end());
        for (std::size_t i = 0; i < ids.size(); ++i) {
          if (train_set.count(ids[i])) company_labels[i] = y.values.at(ids[i]);
        }
        auto m = models::train_rgcn(*rg, *x_companies, company_labels, cfg);
        m.vocab_hash = X.vocab.hash();
        out = models::to_json(m);
        out["company_ids"] = ids;
      } else if (kind == "cluster") {
        if (!gcn) {
          models::GcnConfig cfg = c.gcn;
          cfg.seed = model_seed(c, sdg, 2);
          gcn = models::train_gcn(*sg, X, y, train_ids, cfg);
        }
        const int k = std::min<int>(c.clusters, static_cast<int>(sg->node_count()));
        if (k < c.clusters) log("cluster count lowered to the " + std::to_string(k) + " graph nodes");
        auto assign = models::cluster_graph(*sg, k, model_seed(c, sdg, 4));
        features::LabelVector known;
        known.sdg = sdg;
        for (const auto& id : train_ids) known.values[id] = y.values.at(id);
        models::assign_mean_scores(assign, known);
        const CsrMatrix xs = models::feature_rows(X, sg->nodes());
        const auto preds = models::predict_gcn(*gcn, xs, assign.nodes);
        json probs = json::object(), source = json::object();
        for (std::size_t i = 0; i < assign.nodes.size(); ++i) {
          const auto& mean = assign.mean_score[static_cast<std::size_t>(assign.cluster[i])];
          const ProbabilityVector p = mean ? one_hot(encode_score(*mean)) : preds[i].probs;
          probs[assign.nodes[i]] = p;
          source[assign.nodes[i]] = mean ? "cluster" : "gcn";
        }
        json means = json::array();
        for (const auto& m : assign.mean_score) means.push_back(m ? json(*m) : json(nullptr));
        out = {{"kind", "cluster"},
               {"vocab_hash", X.vocab.hash()},
               {"k", assign.k},
               {"nodes", assign.nodes},
               {"cluster", assign.cluster},
               {"mean_score", means},
               {"source", source},
               {"probs", probs}};
      }
      const fs::path p = model_path(c, sdg, kind);
      write_text_file(p, out.dump() + "\n");
      j.outputs.push_back(p);
      log("train: SDG " + std::to_string(sdg) + " " + kind);
    }
  }
  write_manifest(c, "train", under(c, "models"), j);
}

void predict(const PipelineConfig& c) {
  const auto list = companies(c);
  const auto ids = company_ids(list);
  const auto X = load_features(c);
  StageJournal j;
  j.inputs = {under(c, "features/vocab.tsv"), under(c, "features/rows.jsonl")};
  std::ostringstream csv;
  csv << kPredictionsHeader << "\n";

  for (int sdg : c.sdgs) {
    for (const auto& kind : c.models) {
      const fs::path p = model_path(c, sdg, kind);
      const json mj = load_json(p);
      j.inputs.push_back(p);
      if (mj.value("vocab_hash", std::uint64_t{0}) != X.vocab.hash()) {
        throw Error(ErrorKind::kInvalidArgument, p.string() + " was trained on a different vocabulary");
      }
      std::map<std::string, ProbabilityVector> probs;
      if (kind == "brf") {
        const auto m = models::brf_from_json(mj);
        for (const auto& id : ids) probs[id] = m.predict_proba(X.row(id));
      } else if (kind == "gcn") {
        const auto m = models::gcn_from_json(mj);
        const auto preds = models::predict_gcn(m, models::feature_rows(X, m.nodes), ids);
        for (const auto& pr : preds) probs[pr.id] = pr.probs;
      } else if (kind == "rgcn") {
        const auto m = models::rgcn_from_json(mj);
        const auto model_ids = mj.at("company_ids").get<std::vector<std::string>>();
        const Matrix pm = models::predict_rgcn(m, models::feature_rows(X, model_ids));
        for (std::size_t i = 0; i < model_ids.size(); ++i) {
          ProbabilityVector pv{};
          for (int k = 0; k < kNumClasses; ++k) pv[k] = pm(i, static_cast<std::size_t>(k));
          probs[model_ids[i]] = pv;
        }
      } else if (kind == "cluster") {
        for (const auto& [id, v] : mj.at("probs").items()) probs[id] = v.get<ProbabilityVector>();
      }
      for (const auto& id : ids) {
        auto it = probs.find(id);
        if (it == probs.end()) throw Error(ErrorKind::kNotFound, kind + " model has no prediction for " + id);
        csv << id << "," << sdg << "," << kind << "," << decode_class(argmax(it->second));
        for (double v : it->second) csv << "," << format_prob(v);
        csv << "\n";
      }
    }
  }
  const fs::path out = under(c, "predictions.csv");
  write_text_file(out, csv.str());
  j.outputs = {out};
  write_manifest(c, "predict", c.output_dir, j);
  log("predict: wrote " + out.string());
}

// --- explanations -----------------------------------------------------------

void explain(const PipelineConfig& c, const ExplainRequest& request) {
  const auto list = companies(c);
  const auto X = load_features(c);
  const auto evidence = relevance::read_evidence_jsonl(under(c, "text/evidence.jsonl"));
  explain::NameLookup names;
  for (const auto& co : list) names[co.id] = co.name;

  std::vector<std::string> targets;
  if (request.company) {
    if (!X.find_row(*request.company)) throw Error(ErrorKind::kNotFound, "unknown company " + *request.company);
    targets = {*request.company};
  } else if (!c.explain.companies.empty()) {
    targets = c.explain.companies;
  } else {
    targets = company_ids(list);
  }
  std::vector<int> sdgs = request.sdg ? std::vector<int>{*request.sdg} : c.sdgs;

  StageJournal j;
  j.inputs = {under(c, "features/vocab.tsv"), under(c, "features/rows.jsonl"), under(c, "text/evidence.jsonl")};
  std::vector<explain::ReportEntry> entries;
  for (int sdg : sdgs) {
    std::vector<std::pair<std::string, json>> loaded;
    if (request.model) {
      json mj = load_json(*request.model);
      j.inputs.push_back(*request.model);
      loaded.push_back({mj.value("kind", std::string("unknown")), std::move(mj)});
    } else {
      for (const char* kind : {"brf", "gcn"}) {
        if (std::find(c.models.begin(), c.models.end(), kind) == c.models.end()) continue;
        const fs::path p = model_path(c, sdg, kind);
        loaded.push_back({kind, load_json(p)});
        j.inputs.push_back(p);
      }
    }
    for (const auto& [kind, mj] : loaded) {
      if (mj.value("vocab_hash", std::uint64_t{0}) != X.vocab.hash()) {
        throw Error(ErrorKind::kInvalidArgument, kind + " model was trained on a different vocabulary");
      }
      std::optional<models::BrfModel> brf;
      std::optional<models::GcnModel> gcn;
      std::optional<CsrMatrix> xs;
      if (kind == "brf") {
        brf = models::brf_from_json(mj);
      } else if (kind == "gcn") {
        gcn = models::gcn_from_json(mj);
        xs = models::feature_rows(X, gcn->nodes);
      } else {
        throw Error(ErrorKind::kInvalidArgument, "explanations are available for brf and gcn models, not " + kind);
      }
      for (const auto& id : targets) {
        explain::ReportEntry e;
        e.company_id = id;
        e.company_name = names.count(id) ? names.at(id) : id;
        e.sdg = sdg;
        e.model = kind;
        std::vector<relevance::Evidence> ev;
        for (const auto& row : evidence) {
          if (row.company_id == id && row.sdg == sdg) ev.push_back(row);
        }
        const std::uint64_t seed =
            derive_seed(c.seed, kExplainStream + fnv1a64(id) % 1000003 * 32 + static_cast<std::uint64_t>(sdg));
        if (brf) {
          const auto& row = X.row(id);
          e.probs = brf->predict_proba(row);
          e.predicted_class = argmax(e.probs);
          if (!row.empty()) {
            explain::LimeConfig cfg = c.explain.lime;
            cfg.seed = seed;
            const models::BrfModel& m = *brf;
            auto att = explain::lime_explain([&m](const features::SparseRow& r) { return m.predict_proba(r); }, row,
                                             X.vocab, cfg);
            att.company_id = id;
            att.sdg = sdg;
            e.evidence = explain::supporting_evidence(att, ev);
            e.terms = std::move(att);
          }
        } else {
          const auto pred = models::predict_gcn(*gcn, *xs, std::vector<std::string>{id});
          e.probs = pred[0].probs;
          e.predicted_class = pred[0].cls;
          explain::GnnExplainConfig cfg = c.explain.gnn;
          cfg.seed = seed;
          auto ex = explain::gnn_explain(*gcn, *xs, id, cfg);
          ex.sdg = sdg;
          e.edges = std::move(ex);
          e.evidence = ev;
        }
        entries.push_back(std::move(e));
      }
    }
  }
  const fs::path json_path = under(c, "reports/report.json");
  const fs::path md_path = under(c, "reports/report.md");
  write_text_file(json_path, explain::report_json(entries, names).dump(2) + "\n");
  write_text_file(md_path, explain::report_markdown(entries, names));
  j.outputs = {json_path, md_path};
  write_manifest(c, "explain", json_path.parent_path(), j);
  log("explain: " + std::to_string(entries.size()) + " report entries");
}

// --- evaluation -------------------------------------------------------------

void evaluate(const PipelineConfig& c) {
  const fs::path pred_path = under(c, "predictions.csv");
  const auto rows = read_predictions(pred_path);
  const auto labels = features::read_labels_csv(under(c, "features/labels.csv"));
  const auto splits = load_splits(c);
  std::map<std::tuple<int, std::string, std::string>, int> predicted;
  for (const auto& r : rows) predicted[{r.sdg, r.model, r.company_id}] = r.cls;

  std::vector<eval::SdgResult> results;
  for (int sdg : c.sdgs) {
    const auto& y = labels_for(labels, sdg);
    const auto& test = splits.by_sdg.at(sdg).test;
    for (const auto& kind : c.models) {
      std::vector<int> truth, pred;
      for (const auto& id : test) {
        auto it = predicted.find({sdg, kind, id});
        if (it == predicted.end()) throw Error(ErrorKind::kNotFound, "no " + kind + " prediction for " + id);
        truth.push_back(y.values.at(id));
        pred.push_back(it->second);
      }
      if (truth.empty()) {
        log("SDG " + std::to_string(sdg) + ": empty test split, skipped");
        continue;
      }
      const auto cm = eval::confusion(truth, pred);
      results.push_back({sdg, kind, eval::micro_f1(cm), eval::macro_f1(cm)});
    }
  }
  const eval::ResultTable table = eval::per_sdg_report(results);
  const fs::path csv = under(c, "results/results.csv");
  const fs::path txt = under(c, "results/results.txt");
  const fs::path per = under(c, "results/per_sdg.json");
  write_stream(csv, [&](std::ostream& s) { table.write_csv(s); });
  write_stream(txt, [&](std::ostream& s) { table.write_text(s); });
  json pj = json::array();
  for (const auto& r : results) {
    pj.push_back({{"sdg", r.sdg}, {"model", r.model}, {"micro_f1", r.micro_f1}, {"macro_f1", r.macro_f1}});
  }
  write_text_file(per, pj.dump(2) + "\n");
  StageJournal j;
  j.inputs = {pred_path, under(c, "features/labels.csv"), under(c, "features/splits.json")};
  j.outputs = {csv, txt, per};
  write_manifest(c, "evaluate", csv.parent_path(), j);
  log("evaluate: wrote " + txt.string());
}

void run_all(const PipelineConfig& c) {
  extract_graph(c);
  summarize_graph(c);
  filter_text(c);
  featurize(c);
  train(c);
  predict(c);
  explain(c);
  evaluate(c);
}

}  // namespace sdg::pipeline
