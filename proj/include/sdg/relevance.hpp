// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdg/ingest.hpp"

// Reduces raw documents to SDG evidence: sentence segmentation, keyword-query
// ranking, an entailment gate, and the news significance heuristics.
namespace sdg::relevance {

struct SdgQuery {
  int sdg = 0;
  std::string query_text;   // the SDG's keywords joined by spaces
  std::string description;  // goal statement, the entailment reference
};

// Reads `sdg<NN>.txt` (one keyword per line, '#' comments) from
// `keywords_dir`. Throws sdg::Error(kConfig) for unsupported SDGs or an empty
// keyword list, sdg::Error(kIo) if the file is missing.
SdgQuery load_query(const std::filesystem::path& keywords_dir, int sdg);
std::vector<std::string> load_keywords(const std::filesystem::path& path);

// Splits after '.', '!' or '?' (plus trailing quotes/brackets) when followed by
// whitespace or end of text. A period directly after one of the abbreviations
// in `sentence_abbreviations()` does not end a sentence. Output sentences are
// whitespace-normalized.
std::vector<std::string> split_sentences(std::string_view text);
std::span<const std::string_view> sentence_abbreviations();

struct ScoredSentence {
  std::string sentence;
  double score = 0.0;
  std::size_t index = 0;  // position in the ranked input
};

class SentenceScorer {
 public:
  virtual ~SentenceScorer() = default;
  virtual std::string_view id() const = 0;
  // One finite score per sentence, higher is more relevant.
  virtual std::vector<double> score(const SdgQuery& query,
                                    std::span<const std::string> sentences) const = 0;
};

// Cosine between TF-IDF vectors of the query and each sentence. IDF comes
// from the candidate sentences themselves: idf(t) = ln((1 + N) / (1 + df)) + 1.
// Stopwords are ignored.
class TfidfScorer final : public SentenceScorer {
 public:
  std::string_view id() const override { return "tfidf"; }
  std::vector<double> score(const SdgQuery& query,
                            std::span<const std::string> sentences) const override;
};

// Top-k by score, descending, ties by input order. Throws sdg::Error naming
// the sentence index if the scorer returns a non-finite value.
std::vector<ScoredSentence> rank_relevant(const SentenceScorer& scorer, const SdgQuery& query,
                                          std::span<const std::string> sentences,
                                          std::size_t k = 5);

enum class Entailment { kEntailed, kNeutral, kContradicted };
std::string_view to_string(Entailment e);
std::optional<Entailment> parse_entailment(std::string_view s);

struct EntailmentVerdict {
  Entailment label = Entailment::kNeutral;
  double confidence = 0.0;  // [0, 1]
};

class EntailmentGate {
 public:
  virtual ~EntailmentGate() = default;
  virtual std::string_view id() const = 0;
  // Both strings are passed so a backend may treat the goal statement as
  // premise or hypothesis.
  virtual EntailmentVerdict judge(const SdgQuery& query, std::string_view sentence) const = 0;
};

// Jaccard overlap J of content-token sets between sentence and goal
// statement: J == 0 -> neutral; J > 0 with a negation cue the statement lacks
// -> contradicted; J >= threshold -> entailed; otherwise neutral. Confidence
// is J.
class LexicalGate final : public EntailmentGate {
 public:
  explicit LexicalGate(double threshold = 0.2) : threshold_(threshold) {}
  std::string_view id() const override { return "lexical"; }
  EntailmentVerdict judge(const SdgQuery& query, std::string_view sentence) const override;
  double threshold() const { return threshold_; }

 private:
  double threshold_;
};

EntailmentVerdict entailment_gate(const EntailmentGate& gate, const SdgQuery& query,
                                  const ScoredSentence& candidate);

bool is_negation_cue(std::string_view token);

struct Evidence {
  std::string company_id;
  int sdg = 0;
  std::string sentence;
  double score = 0.0;
  EntailmentVerdict verdict;
  ingest::SourceKind source = ingest::SourceKind::kReport;
  std::optional<std::string> uri;
};

// Segments every document, ranks the union of sentences for one company and
// SDG, and attaches a verdict to each of the top k. Callers keep only
// entailed rows.
std::vector<Evidence> filter_evidence(std::string_view company_id,
                                      std::span<const ingest::Document> docs,
                                      const SdgQuery& query, const SentenceScorer& scorer,
                                      const EntailmentGate& gate, std::size_t k = 5);

void write_evidence_jsonl(std::span<const Evidence> rows, std::ostream& out);
std::vector<Evidence> read_evidence_jsonl(const std::filesystem::path& path);

// --- News -------------------------------------------------------------------

// sentiment * magnitude * mention_count.
double aggregate_news_score(const ingest::NewsArticle& a);

// |A ∩ B| / min(|A|, |B|) over lowercased headline token sets; 0 when either
// set is empty.
double headline_overlap(std::string_view a, std::string_view b);

// Greedy in input order: an article is dropped when its overlap with any
// earlier kept headline is >= threshold. threshold must be in (0, 1].
std::vector<ingest::NewsArticle> dedup_headlines(std::span<const ingest::NewsArticle> articles,
                                                 double threshold = 0.55);

struct InfluentialNews {
  std::vector<ingest::NewsArticle> top;     // descending score
  std::vector<ingest::NewsArticle> bottom;  // ascending score
};

// After deduplication: the n highest-scoring articles, then the n lowest among
// the rest. Ties keep input order.
InfluentialNews select_influential(std::span<const ingest::NewsArticle> articles,
                                   std::size_t n = 5, double dedup_threshold = 0.55);

}  // namespace sdg::relevance
