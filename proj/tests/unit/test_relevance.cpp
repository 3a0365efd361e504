// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "sdg/common.hpp"
#include "sdg/error.hpp"
#include "sdg/relevance.hpp"
#include "sdg/rng.hpp"

using namespace sdg::relevance;
using sdg::ingest::Document;
using sdg::ingest::NewsArticle;

namespace {

SdgQuery energy_query(std::string keywords = "wind solar hydro") {
  return {7, std::move(keywords), std::string(sdg::sdg_goal_statement(7))};
}

NewsArticle article(std::string headline, double sentiment, double magnitude = 1.0, int mentions = 1) {
  NewsArticle a;
  a.company_id = "c";
  a.headline = std::move(headline);
  a.sentiment = sentiment;
  a.magnitude = magnitude;
  a.mention_count = mentions;
  return a;
}

std::string strip_space(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

std::vector<std::string> headlines(const std::vector<NewsArticle>& v) {
  std::vector<std::string> out;
  for (const auto& a : v) out.push_back(a.headline);
  return out;
}

class FixedScorer final : public SentenceScorer {
 public:
  explicit FixedScorer(std::vector<double> s) : s_(std::move(s)) {}
  std::string_view id() const override { return "fixed"; }
  std::vector<double> score(const SdgQuery&, std::span<const std::string>) const override { return s_; }

 private:
  std::vector<double> s_;
};

}  // namespace

TEST_CASE("sentence splitting") {
  CHECK(split_sentences("A. B.") == std::vector<std::string>{"A.", "B."});
  CHECK(split_sentences("").empty());
  CHECK(split_sentences("   \n ").empty());
  CHECK(split_sentences("Approx. 5 MW. Done.") ==
        std::vector<std::string>{"Approx. 5 MW.", "Done."});
  CHECK(split_sentences("Acme Inc. grew fast! Really? Yes") ==
        std::vector<std::string>{"Acme Inc. grew fast!", "Really?", "Yes"});
  CHECK(split_sentences("He said \"stop.\" Then  he\nleft.") ==
        std::vector<std::string>{"He said \"stop.\"", "Then he left."});
  CHECK(split_sentences("Version 2.5 shipped. Fine") ==
        std::vector<std::string>{"Version 2.5 shipped.", "Fine"});
  CHECK(split_sentences("Use e.g. wind. Or i.e. sun.") ==
        std::vector<std::string>{"Use e.g. wind.", "Or i.e. sun."});
}

TEST_CASE("splitting keeps every non-space character") {
  const std::vector<std::string> pieces = {"Inc.", "wind", "no.", "A.", "!", "?", "co.", "x", "\"q.\"",
                                           "(b)", "2.5", "...", "solar."};
  sdg::Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const auto n = rng.below(20);
    for (std::uint64_t i = 0; i < n; ++i) {
      text += pieces[rng.below(pieces.size())];
      text += rng.below(4) == 0 ? "\n " : " ";
    }
    std::string joined;
    for (const auto& s : split_sentences(text)) {
      CHECK_FALSE(s.empty());
      joined += s + " ";
    }
    CHECK(strip_space(joined) == strip_space(text));
  }
}

TEST_CASE("abbreviation list is sorted and lowercase") {
  const auto abbr = sentence_abbreviations();
  CHECK(std::is_sorted(abbr.begin(), abbr.end()));
  for (auto a : abbr) CHECK(std::none_of(a.begin(), a.end(), [](char c) { return std::isupper(c); }));
  CHECK(std::binary_search(abbr.begin(), abbr.end(), "inc"));
}

TEST_CASE("keyword queries") {
  const auto q = load_query(std::filesystem::path(SDG_DATA_DIR) / "keywords", 7);
  CHECK(q.sdg == 7);
  CHECK(q.query_text.find("wind") != std::string::npos);
  CHECK(q.description == sdg::sdg_goal_statement(7));
  for (int sdg : sdg::kSupportedSdgs) {
    CHECK_FALSE(load_query(std::filesystem::path(SDG_DATA_DIR) / "keywords", sdg).query_text.empty());
  }
  CHECK_THROWS_AS(load_query(std::filesystem::path(SDG_DATA_DIR) / "keywords", 4), sdg::Error);
}

TEST_CASE("tf-idf cosine against hand computation") {
  // df over the 3 sentences: wind 2, power 3, every other term 1.
  const std::vector<std::string> s = {"wind solar hydro power", "wind cement steel power",
                                      "bank loans credit power"};
  const auto scores = TfidfScorer().score(energy_query(), s);
  const double idf_wind = std::log(4.0 / 3.0) + 1.0;
  const double idf_one = std::log(2.0) + 1.0;
  const double q2 = idf_wind * idf_wind + 2 * idf_one * idf_one;
  CHECK(scores[0] == doctest::Approx(std::sqrt(q2 / (q2 + 1.0))).epsilon(1e-12));
  const double s1 = std::sqrt(idf_wind * idf_wind + 2 * idf_one * idf_one + 1.0);
  CHECK(scores[1] == doctest::Approx(idf_wind * idf_wind / (std::sqrt(q2) * s1)).epsilon(1e-12));
  CHECK(scores[2] == 0.0);

  const auto ranked = rank_relevant(TfidfScorer(), energy_query(), s);
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].index == 0);
  CHECK(ranked[1].index == 1);
  CHECK(ranked[2].index == 2);
}

TEST_CASE("ranking ties and limits") {
  const std::vector<std::string> same = {"wind power", "wind power", "wind power"};
  const auto r = rank_relevant(TfidfScorer(), energy_query(), same, 2);
  REQUIRE(r.size() == 2);
  CHECK(r[0].score == r[1].score);
  CHECK(r[0].index == 0);
  CHECK(r[1].index == 1);
  CHECK_THROWS_AS(rank_relevant(TfidfScorer(), energy_query(), same, 0), sdg::Error);
  CHECK(rank_relevant(TfidfScorer(), energy_query(), {}, 5).empty());
}

TEST_CASE("ranking is a stable top-k") {
  sdg::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(15);
    std::vector<double> scores(n);
    for (auto& v : scores) v = static_cast<double>(rng.below(5));
    std::vector<std::string> sentences(n, "x");
    const std::size_t k = 1 + rng.below(6);
    const auto r = rank_relevant(FixedScorer(scores), energy_query(), sentences, k);
    CHECK(r.size() == std::min(k, n));
    std::set<std::size_t> kept;
    for (std::size_t i = 0; i < r.size(); ++i) {
      kept.insert(r[i].index);
      if (i > 0) {
        CHECK(r[i - 1].score >= r[i].score);
        if (r[i - 1].score == r[i].score) CHECK(r[i - 1].index < r[i].index);
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!kept.count(j)) CHECK(scores[j] <= r.back().score);
    }
  }
}

TEST_CASE("scorer failures name the sentence") {
  const std::vector<std::string> s = {"a", "b"};
  try {
    rank_relevant(FixedScorer({0.1, std::nan("")}), energy_query(), s);
    FAIL("expected error");
  } catch (const sdg::Error& e) {
    CHECK(std::string(e.what()).find("sentence 1") != std::string::npos);
  }
  CHECK_THROWS_AS(rank_relevant(FixedScorer({0.1}), energy_query(), s), sdg::Error);
}

TEST_CASE("lexical gate on constructed pairs") {
  // Goal 7 content tokens: ensure access affordable reliable sustainable modern energy.
  const LexicalGate gate;
  const SdgQuery q = energy_query();
  struct Case {
    const char* sentence;
    Entailment label;
    double confidence;
  };
  const Case cases[] = {
      {"We provide affordable and reliable energy.", Entailment::kEntailed, 3.0 / 8.0},
      {"Energy prices rose.", Entailment::kNeutral, 1.0 / 9.0},
      {"We do not provide affordable energy.", Entailment::kContradicted, 2.0 / 9.0},
      {"The bank reported profits.", Entailment::kNeutral, 0.0},
      {"Sustainable modern energy access for all customers.", Entailment::kEntailed, 4.0 / 8.0},
  };
  for (const auto& c : cases) {
    CAPTURE(c.sentence);
    const auto v = entailment_gate(gate, q, {c.sentence, 1.0, 0});
    CHECK(v.label == c.label);
    CHECK(v.confidence == doctest::Approx(c.confidence).epsilon(1e-12));
  }
  const auto empty = gate.judge(q, "");
  CHECK(empty.label == Entailment::kNeutral);
  CHECK(empty.confidence == 0.0);
  const auto same = gate.judge(q, q.description);
  CHECK(same.label == Entailment::kEntailed);
  CHECK(same.confidence == 1.0);
}

TEST_CASE("entailment labels") {
  for (auto e : {Entailment::kEntailed, Entailment::kNeutral, Entailment::kContradicted}) {
    CHECK(parse_entailment(to_string(e)) == e);
  }
  CHECK(is_negation_cue("not"));
  CHECK(is_negation_cue("without"));
  CHECK_FALSE(is_negation_cue("energy"));
}

TEST_CASE("evidence filtering never invents text") {
  std::vector<Document> docs(2);
  docs[0].company_id = "acme";
  docs[0].source = sdg::ingest::SourceKind::kReport;
  docs[0].uri = "https://acme.example/r.pdf";
  docs[0].text = "Acme runs wind farms. It sells affordable and reliable energy to all. Approx. 5 MW of solar.";
  docs[1].company_id = "acme";
  docs[1].source = sdg::ingest::SourceKind::kWikipedia;
  docs[1].text = "Acme Inc. is a utility. It has offices in Bonn.";
  const auto ev = filter_evidence("acme", docs, energy_query("wind solar energy affordable"),
                                  TfidfScorer(), LexicalGate(), 3);
  REQUIRE(ev.size() == 3);
  for (const auto& e : ev) {
    CHECK(e.company_id == "acme");
    CHECK(e.sdg == 7);
    const bool found = std::any_of(docs.begin(), docs.end(), [&](const Document& d) {
      return d.text.find(e.sentence) != std::string::npos;
    });
    CHECK(found);
  }
  CHECK(ev[0].sentence == "It sells affordable and reliable energy to all.");
  CHECK(ev[0].verdict.label == Entailment::kEntailed);
  CHECK(ev[0].uri == "https://acme.example/r.pdf");

  const auto path = std::filesystem::temp_directory_path() / "sdg_evidence_roundtrip.jsonl";
  {
    std::ofstream out(path);
    write_evidence_jsonl(ev, out);
  }
  const auto back = read_evidence_jsonl(path);
  REQUIRE(back.size() == ev.size());
  for (std::size_t i = 0; i < ev.size(); ++i) {
    CHECK(back[i].sentence == ev[i].sentence);
    CHECK(back[i].score == ev[i].score);
    CHECK(back[i].verdict.label == ev[i].verdict.label);
    CHECK(back[i].source == ev[i].source);
    CHECK(back[i].uri == ev[i].uri);
  }
  std::filesystem::remove(path);
}

TEST_CASE("aggregate news score") {
  CHECK(aggregate_news_score(article("h", 0.5, 2.0, 3)) == 3.0);
  CHECK(aggregate_news_score(article("h", -0.5, 2.0, 3)) == -3.0);
  CHECK(aggregate_news_score(article("h", 0.9, 0.0, 10)) == 0.0);
}

TEST_CASE("aggregate news score sign and monotonicity") {
  sdg::Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const double s = rng.uniform(-1.0, 1.0);
    const double m = rng.uniform(0.01, 5.0);
    const int c = 1 + static_cast<int>(rng.below(20));
    const double v = aggregate_news_score(article("h", s, m, c));
    CHECK((v > 0) == (s > 0));
    const double sp = std::abs(s);
    CHECK(aggregate_news_score(article("h", sp, m + 0.5, c)) >= aggregate_news_score(article("h", sp, m, c)));
    CHECK(aggregate_news_score(article("h", sp, m, c + 1)) >= aggregate_news_score(article("h", sp, m, c)));
    CHECK(aggregate_news_score(article("h", std::min(1.0, sp + 0.1), m, c)) >=
          aggregate_news_score(article("h", sp, m, c)));
  }
}

TEST_CASE("headline dedup") {
  CHECK(headline_overlap("acme buys beta corp", "acme buys beta") == 1.0);
  CHECK(headline_overlap("wind farm opens", "bank fined") == 0.0);
  CHECK(headline_overlap("", "bank fined") == 0.0);
  CHECK(headline_overlap("Acme Buys", "acme buys acme") == 1.0);

  const std::vector<NewsArticle> v = {article("acme buys beta corp", 0.1), article("acme buys beta", 0.2),
                                      article("Wind farm opens", 0.3), article("wind farm opens", 0.4),
                                      article("bank fined over fraud", -0.5)};
  const auto d = dedup_headlines(v);
  CHECK(headlines(d) ==
        std::vector<std::string>{"acme buys beta corp", "Wind farm opens", "bank fined over fraud"});
  CHECK(headlines(dedup_headlines(d)) == headlines(d));
  CHECK_THROWS_AS(dedup_headlines(v, 0.0), sdg::Error);
  CHECK_THROWS_AS(dedup_headlines(v, 1.5), sdg::Error);
  CHECK(dedup_headlines(v, 1.0).size() == 3);
}

TEST_CASE("influential news selection") {
  SUBCASE("small input all goes to top") {
    const std::vector<NewsArticle> v = {article("one", 0.1), article("two", 0.9), article("three", -0.4)};
    const auto r = select_influential(v, 5);
    CHECK(headlines(r.top) == std::vector<std::string>{"two", "one", "three"});
    CHECK(r.bottom.empty());
  }
  SUBCASE("distinct scores against a sort oracle") {
    sdg::Rng rng(9);
    std::vector<NewsArticle> v;
    for (int i = 0; i < 12; ++i) v.push_back(article("headline" + std::to_string(i), rng.uniform(-1.0, 1.0)));
    const auto r = select_influential(v, 5);
    std::vector<NewsArticle> sorted = v;
    std::sort(sorted.begin(), sorted.end(),
              [](const NewsArticle& a, const NewsArticle& b) { return a.sentiment > b.sentiment; });
    REQUIRE(r.top.size() == 5);
    REQUIRE(r.bottom.size() == 5);
    for (int i = 0; i < 5; ++i) {
      CHECK(r.top[i].headline == sorted[i].headline);
      CHECK(r.bottom[i].headline == sorted[11 - i].headline);
    }
  }
  SUBCASE("equal scores follow input order") {
    std::vector<NewsArticle> v;
    for (int i = 0; i < 12; ++i) v.push_back(article("item" + std::to_string(i), 0.5));
    const auto r = select_influential(v, 5);
    CHECK(headlines(r.top) == std::vector<std::string>{"item0", "item1", "item2", "item3", "item4"});
    CHECK(headlines(r.bottom) == std::vector<std::string>{"item5", "item6", "item7", "item8", "item9"});
  }
  SUBCASE("duplicates are removed first") {
    const std::vector<NewsArticle> v = {article("acme buys beta", 0.9), article("acme buys beta corp", 0.95),
                                        article("bank fined", -0.9)};
    const auto r = select_influential(v, 1);
    CHECK(headlines(r.top) == std::vector<std::string>{"acme buys beta"});
    CHECK(headlines(r.bottom) == std::vector<std::string>{"bank fined"});
  }
  CHECK_THROWS_AS(select_influential({}, 0), sdg::Error);
}
