// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Access to the three text sources: web search for sustainability reports,
// encyclopedia descriptions and news. The fixture backend reads JSONL files
// laid out as
//
//   <root>/companies.jsonl
//   <root>/reports/<company_id>.jsonl
//   <root>/wikipedia/<company_id>.jsonl
//   <root>/news/<company_id>.jsonl
//
// and validates every record at the boundary, so callers only ever see
// well-formed Documents and NewsArticles.
namespace sdg::ingest {

enum class SourceKind { kReport, kWeb, kWikipedia, kNews };

std::string_view to_string(SourceKind kind);
std::optional<SourceKind> parse_source_kind(std::string_view s);

struct Date {
  int year = 0;
  int month = 1;
  int day = 1;

  // ISO `YYYY-MM-DD`; throws sdg::Error(kParse).
  static Date parse(std::string_view s);
  std::string to_string() const;

  friend auto operator<=>(const Date&, const Date&) = default;
};

struct Company {
  std::string id;
  std::string name;
  std::optional<std::string> kg_entity;
  std::optional<std::string> sector;
  // SDG -> score in [-3, 3].
  std::map<int, int> labels;
};

struct Document {
  std::string company_id;
  SourceKind source = SourceKind::kReport;
  std::string text;
  std::optional<std::string> uri;
  std::optional<Date> retrieved_at;
};

struct NewsArticle {
  std::string company_id;
  std::string headline;
  std::optional<std::string> body;
  double sentiment = 0.0;   // [-1, 1]
  double magnitude = 0.0;   // >= 0
  int mention_count = 0;    // >= 0
  Date published;
};

// Throw sdg::Error(kParse) describing the first violated invariant.
void validate(const Company& c);
void validate(const Document& d);
void validate(const NewsArticle& a);

class SearchProvider {
 public:
  virtual ~SearchProvider() = default;
  // Report and web-page documents; PDF-derived text first.
  virtual std::vector<Document> find_reports(const Company& company) const = 0;
};

class WikiProvider {
 public:
  virtual ~WikiProvider() = default;
  virtual std::optional<Document> description(const Company& company) const = 0;
};

class NewsProvider {
 public:
  virtual ~NewsProvider() = default;
  virtual std::vector<NewsArticle> news_for(const Company& company, int year) const = 0;
};

class FixtureSearchProvider final : public SearchProvider {
 public:
  explicit FixtureSearchProvider(std::filesystem::path root) : root_(std::move(root)) {}
  std::vector<Document> find_reports(const Company& company) const override;

 private:
  std::filesystem::path root_;
};

class FixtureWikiProvider final : public WikiProvider {
 public:
  explicit FixtureWikiProvider(std::filesystem::path root) : root_(std::move(root)) {}
  std::optional<Document> description(const Company& company) const override;

 private:
  std::filesystem::path root_;
};

class FixtureNewsProvider final : public NewsProvider {
 public:
  explicit FixtureNewsProvider(std::filesystem::path root) : root_(std::move(root)) {}
  std::vector<NewsArticle> news_for(const Company& company, int year) const override;

 private:
  std::filesystem::path root_;
};

struct Providers {
  std::shared_ptr<const SearchProvider> search;
  std::shared_ptr<const WikiProvider> wiki;
  std::shared_ptr<const NewsProvider> news;
};

Providers fixture_providers(const std::filesystem::path& root);

// SDG_FIXTURE_DIR when set, otherwise `fallback`.
std::filesystem::path fixture_root(const std::filesystem::path& fallback = {});

// One JSON object per line: {id, name, kg_entity?, sector?}.
std::vector<Company> load_companies(const std::filesystem::path& path);

}  // namespace sdg::ingest
