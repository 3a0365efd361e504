// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdg/relevance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

#include "jsonl.hpp"
#include "sdg/common.hpp"
#include "sdg/error.hpp"
#include "sdg/text.hpp"

namespace sdg::relevance {

namespace {

using nlohmann::json;

// Sorted; looked up with binary_search.
constexpr std::array<std::string_view, 32> kAbbreviations = {
    "approx", "apr", "aug", "co",  "corp", "dec", "dept", "dr", "e.g", "est", "etc",
    "feb",    "fig", "i.e", "inc", "jan",  "jr",  "jul",  "jun", "llc", "ltd", "mr",
    "mrs",    "ms",  "no",  "nov", "oct",  "sep", "sr",   "st",  "vol", "vs",
};

constexpr std::array<std::string_view, 16> kNegationCues = {
    "aren", "cannot", "didn",   "doesn", "isn",   "neither", "never",   "no",
    "nobody", "none", "nor",    "not",   "nothing", "nowhere", "wasn",  "without",
};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

bool is_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

// The word (letters, digits and inner periods) ending just before `dot`.
std::string word_before(std::string_view text, std::size_t dot) {
  std::size_t b = dot;
  while (b > 0 && (is_alnum(text[b - 1]) || (text[b - 1] == '.' && b >= 2 && is_alnum(text[b - 2])))) {
    --b;
  }
  std::string w(text.substr(b, dot - b));
  for (char& c : w) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return w;
}

bool is_abbreviation(std::string_view w) {
  return std::binary_search(kAbbreviations.begin(), kAbbreviations.end(), w);
}

std::set<std::string> token_set(std::vector<std::string> tokens) {
  return {std::make_move_iterator(tokens.begin()), std::make_move_iterator(tokens.end())};
}

std::size_t intersection_size(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t n = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

bool has_negation(const std::vector<std::string>& tokens) {
  return std::any_of(tokens.begin(), tokens.end(),
                     [](const std::string& t) { return is_negation_cue(t); });
}

}  // namespace

// --- Queries ------------------------------------------------------------------

std::vector<std::string> load_keywords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open keyword file " + path.string());
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    std::string kw = text::normalize_whitespace(line);
    if (kw.empty() || kw.front() == '#') continue;
    out.push_back(std::move(kw));
  }
  return out;
}

SdgQuery load_query(const std::filesystem::path& keywords_dir, int sdg) {
  if (!is_supported_sdg(sdg)) {
    throw Error(ErrorKind::kConfig, "unsupported SDG " + std::to_string(sdg));
  }
  char name[16];
  std::snprintf(name, sizeof name, "sdg%02d.txt", sdg);
  const auto keywords = load_keywords(keywords_dir / name);
  if (keywords.empty()) {
    throw Error(ErrorKind::kConfig, "no keywords for SDG " + std::to_string(sdg));
  }
  SdgQuery q;
  q.sdg = sdg;
  for (const auto& k : keywords) {
    if (!q.query_text.empty()) q.query_text.push_back(' ');
    q.query_text += k;
  }
  q.description = std::string(sdg_goal_statement(sdg));
  return q;
}

// --- Segmentation -------------------------------------------------------------

std::span<const std::string_view> sentence_abbreviations() { return kAbbreviations; }

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  auto emit = [&](std::string_view piece) {
    std::string s = text::normalize_whitespace(piece);
    if (!s.empty()) out.push_back(std::move(s));
  };
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_terminal(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && (is_terminal(text[j]) || is_closer(text[j]))) ++j;
    const bool at_boundary = j == text.size() || is_space(text[j]);
    const bool lone_period = text[i] == '.' && (j == i + 1 || is_closer(text[i + 1]));
    if (at_boundary && !(lone_period && is_abbreviation(word_before(text, i)))) {
      emit(text.substr(start, j - start));
      start = j;
    }
    i = j;
  }
  if (start < text.size()) emit(text.substr(start));
  return out;
}

// --- Ranking ------------------------------------------------------------------

std::vector<double> TfidfScorer::score(const SdgQuery& query,
                                       std::span<const std::string> sentences) const {
  const std::size_t n = sentences.size();
  std::vector<std::map<std::string, double>> tf(n);
  std::unordered_map<std::string, std::size_t> df;
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& t : text::content_tokens(sentences[i])) tf[i][t] += 1.0;
    for (const auto& [t, _] : tf[i]) ++df[t];
  }
  auto idf = [&](const std::string& t) {
    auto it = df.find(t);
    const double d = it == df.end() ? 0.0 : static_cast<double>(it->second);
    return std::log((1.0 + static_cast<double>(n)) / (1.0 + d)) + 1.0;
  };
  std::map<std::string, double> q;
  for (auto& t : text::content_tokens(query.query_text)) q[t] += 1.0;
  double q_norm = 0.0;
  for (auto& [t, w] : q) {
    w *= idf(t);
    q_norm += w * w;
  }
  q_norm = std::sqrt(q_norm);

  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double dotp = 0.0;
    double s_norm = 0.0;
    for (const auto& [t, c] : tf[i]) {
      const double w = c * idf(t);
      s_norm += w * w;
      if (auto it = q.find(t); it != q.end()) dotp += w * it->second;
    }
    s_norm = std::sqrt(s_norm);
    out[i] = (q_norm > 0.0 && s_norm > 0.0) ? dotp / (q_norm * s_norm) : 0.0;
  }
  return out;
}

std::vector<ScoredSentence> rank_relevant(const SentenceScorer& scorer, const SdgQuery& query,
                                          std::span<const std::string> sentences,
                                          std::size_t k) {
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "rank_relevant: k must be >= 1");
  const std::vector<double> scores = scorer.score(query, sentences);
  if (scores.size() != sentences.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string("scorer ") + std::string(scorer.id()) + " returned " +
                    std::to_string(scores.size()) + " scores for " +
                    std::to_string(sentences.size()) + " sentences");
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw Error(ErrorKind::kNumeric, std::string("scorer ") + std::string(scorer.id()) +
                                           ": non-finite score for sentence " + std::to_string(i));
    }
  }
  std::vector<std::size_t> order(sentences.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(std::min(k, order.size()));
  std::vector<ScoredSentence> out;
  out.reserve(order.size());
  for (std::size_t i : order) out.push_back({sentences[i], scores[i], i});
  return out;
}

// --- Entailment ---------------------------------------------------------------

std::string_view to_string(Entailment e) {
  switch (e) {
    case Entailment::kEntailed: return "entailed";
    case Entailment::kNeutral: return "neutral";
    case Entailment::kContradicted: return "contradicted";
  }
  return "neutral";
}

std::optional<Entailment> parse_entailment(std::string_view s) {
  if (s == "entailed") return Entailment::kEntailed;
  if (s == "neutral") return Entailment::kNeutral;
  if (s == "contradicted") return Entailment::kContradicted;
  return std::nullopt;
}

bool is_negation_cue(std::string_view token) {
  return std::binary_search(kNegationCues.begin(), kNegationCues.end(), token);
}

EntailmentVerdict LexicalGate::judge(const SdgQuery& query, std::string_view sentence) const {
  const auto sent_tokens = text::tokenize(sentence);
  const auto desc_tokens = text::tokenize(query.description);
  const auto s = token_set(text::content_tokens(sentence));
  const auto d = token_set(text::content_tokens(query.description));
  const std::size_t inter = intersection_size(s, d);
  const std::size_t uni = s.size() + d.size() - inter;
  const double jaccard = uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
  if (inter == 0) return {Entailment::kNeutral, jaccard};
  if (has_negation(sent_tokens) && !has_negation(desc_tokens)) {
    return {Entailment::kContradicted, jaccard};
  }
  if (jaccard >= threshold_) return {Entailment::kEntailed, jaccard};
  return {Entailment::kNeutral, jaccard};
}

EntailmentVerdict entailment_gate(const EntailmentGate& gate, const SdgQuery& query,
                                  const ScoredSentence& candidate) {
  EntailmentVerdict v = gate.judge(query, candidate.sentence);
  if (!(v.confidence >= 0.0 && v.confidence <= 1.0)) {
    throw Error(ErrorKind::kNumeric,
                std::string("gate ") + std::string(gate.id()) + " returned confidence outside [0, 1]");
  }
  return v;
}

// --- Evidence -----------------------------------------------------------------

std::vector<Evidence> filter_evidence(std::string_view company_id,
                                      std::span<const ingest::Document> docs,
                                      const SdgQuery& query, const SentenceScorer& scorer,
                                      const EntailmentGate& gate, std::size_t k) {
  std::vector<std::string> sentences;
  std::vector<std::size_t> doc_of;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (auto& s : split_sentences(docs[d].text)) {
      sentences.push_back(std::move(s));
      doc_of.push_back(d);
    }
  }
  std::vector<Evidence> out;
  for (const ScoredSentence& c : rank_relevant(scorer, query, sentences, k)) {
    const ingest::Document& doc = docs[doc_of[c.index]];
    Evidence e;
    e.company_id = std::string(company_id);
    e.sdg = query.sdg;
    e.sentence = c.sentence;
    e.score = c.score;
    e.verdict = entailment_gate(gate, query, c);
    e.source = doc.source;
    e.uri = doc.uri;
    out.push_back(std::move(e));
  }
  return out;
}

void write_evidence_jsonl(std::span<const Evidence> rows, std::ostream& out) {
  for (const Evidence& e : rows) {
    json j;
    j["company_id"] = e.company_id;
    j["sdg"] = e.sdg;
    j["sentence"] = e.sentence;
    j["score"] = e.score;
    j["verdict"] = std::string(to_string(e.verdict.label));
    j["confidence"] = e.verdict.confidence;
    j["source"] = std::string(ingest::to_string(e.source));
    j["uri"] = e.uri ? json(*e.uri) : json(nullptr);
    out << j.dump() << '\n';
  }
}

std::vector<Evidence> read_evidence_jsonl(const std::filesystem::path& path) {
  std::vector<Evidence> out;
  detail::for_each_jsonl(path, [&](const json& j, std::size_t line) {
    try {
      Evidence e;
      e.company_id = j.at("company_id").get<std::string>();
      e.sdg = j.at("sdg").get<int>();
      e.sentence = j.at("sentence").get<std::string>();
      e.score = j.at("score").get<double>();
      const auto label = parse_entailment(j.at("verdict").get<std::string>());
      const auto source = ingest::parse_source_kind(j.at("source").get<std::string>());
      if (!label || !source) throw Error(ErrorKind::kParse, "bad verdict or source");
      e.verdict = {*label, detail::field_or<double>(j, "confidence", 0.0)};
      e.source = *source;
      if (j.contains("uri") && !j.at("uri").is_null()) e.uri = j.at("uri").get<std::string>();
      out.push_back(std::move(e));
    } catch (const std::exception& ex) {
      throw Error(ErrorKind::kParse, path.string() + ":" + std::to_string(line) + ": " + ex.what());
    }
  });
  return out;
}

// --- News ---------------------------------------------------------------------

double aggregate_news_score(const ingest::NewsArticle& a) {
  return a.sentiment * a.magnitude * static_cast<double>(a.mention_count);
}

double headline_overlap(std::string_view a, std::string_view b) {
  const auto sa = token_set(text::tokenize(a));
  const auto sb = token_set(text::tokenize(b));
  const std::size_t smaller = std::min(sa.size(), sb.size());
  if (smaller == 0) return 0.0;
  return static_cast<double>(intersection_size(sa, sb)) / static_cast<double>(smaller);
}

std::vector<ingest::NewsArticle> dedup_headlines(std::span<const ingest::NewsArticle> articles,
                                                 double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "dedup threshold must be in (0, 1]");
  }
  std::vector<ingest::NewsArticle> kept;
  for (const auto& a : articles) {
    const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const ingest::NewsArticle& k) {
      return headline_overlap(a.headline, k.headline) >= threshold;
    });
    if (!duplicate) kept.push_back(a);
  }
  return kept;
}

InfluentialNews select_influential(std::span<const ingest::NewsArticle> articles, std::size_t n,
                                   double dedup_threshold) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "select_influential: n must be >= 1");
  const auto unique = dedup_headlines(articles, dedup_threshold);
  std::vector<double> score(unique.size());
  for (std::size_t i = 0; i < unique.size(); ++i) score[i] = aggregate_news_score(unique[i]);

  std::vector<std::size_t> order(unique.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  const std::size_t n_top = std::min(n, order.size());
  std::vector<std::size_t> rest(order.begin() + static_cast<std::ptrdiff_t>(n_top), order.end());
  std::sort(rest.begin(), rest.end());  // back to input order before the ascending pass
  std::stable_sort(rest.begin(), rest.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });

  InfluentialNews out;
  for (std::size_t i = 0; i < n_top; ++i) out.top.push_back(unique[order[i]]);
  for (std::size_t i = 0; i < std::min(n, rest.size()); ++i) out.bottom.push_back(unique[rest[i]]);
  return out;
}

}  // namespace sdg::relevance
