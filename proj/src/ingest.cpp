// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdg/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "jsonl.hpp"
#include "sdg/common.hpp"
#include "sdg/error.hpp"

namespace sdg::ingest {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::kParse, where + ": " + what);
}

std::string where(const std::filesystem::path& p, std::size_t record) {
  return p.string() + ": record " + std::to_string(record);
}

std::filesystem::path company_file(const std::filesystem::path& root, std::string_view dir,
                                   const Company& c) {
  if (c.id.empty() || c.id.find('/') != std::string::npos || c.id == "." || c.id == "..") {
    throw Error(ErrorKind::kInvalidArgument, "company id not usable as a file name: " + c.id);
  }
  return root / dir / (c.id + ".jsonl");
}

void require_name(const Company& c) {
  if (c.name.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "company " + c.id + " has no name");
  }
}

// Converts json type errors into record-level parse errors.
template <typename Fn>
auto guarded(const std::string& loc, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    invalid(loc, e.what());
  }
}

}  // namespace

std::string_view to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::kReport: return "report";
    case SourceKind::kWeb: return "web";
    case SourceKind::kWikipedia: return "wikipedia";
    case SourceKind::kNews: return "news";
  }
  return "unknown";
}

std::optional<SourceKind> parse_source_kind(std::string_view s) {
  if (s == "report") return SourceKind::kReport;
  if (s == "web") return SourceKind::kWeb;
  if (s == "wikipedia") return SourceKind::kWikipedia;
  if (s == "news") return SourceKind::kNews;
  return std::nullopt;
}

Date Date::parse(std::string_view s) {
  Date d;
  auto num = [&](std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    auto [p, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, out);
    return ec == std::errc{} && p == s.data() + pos + len;
  };
  const bool shape = s.size() == 10 && s[4] == '-' && s[7] == '-';
  if (!shape || !num(0, 4, d.year) || !num(5, 2, d.month) || !num(8, 2, d.day) ||
      d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) {
    throw Error(ErrorKind::kParse, "invalid date (expected YYYY-MM-DD): " + std::string(s));
  }
  return d;
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

void validate(const Company& c) {
  if (c.id.empty()) invalid("company", "id must be non-empty");
  for (auto [sdg, score] : c.labels) {
    if (!is_supported_sdg(sdg)) invalid("company " + c.id, "unsupported SDG " + std::to_string(sdg));
    if (!is_valid_score(score)) invalid("company " + c.id, "score out of range");
  }
}

void validate(const Document& d) {
  if (d.text.find_first_not_of(" \t\r\n") == std::string::npos) {
    invalid("document for " + d.company_id, "text must be non-empty");
  }
}

void validate(const NewsArticle& a) {
  const std::string loc = "news for " + a.company_id;
  if (a.headline.find_first_not_of(" \t\r\n") == std::string::npos) {
    invalid(loc, "headline must be non-empty");
  }
  if (!std::isfinite(a.sentiment) || a.sentiment < -1.0 || a.sentiment > 1.0) {
    invalid(loc, "sentiment out of range [-1, 1]: " + std::to_string(a.sentiment));
  }
  if (!std::isfinite(a.magnitude) || a.magnitude < 0.0) {
    invalid(loc, "magnitude must be >= 0: " + std::to_string(a.magnitude));
  }
  if (a.mention_count < 0) {
    invalid(loc, "mention_count must be >= 0: " + std::to_string(a.mention_count));
  }
}

std::vector<Document> FixtureSearchProvider::find_reports(const Company& company) const {
  require_name(company);
  const auto path = company_file(root_, "reports", company);
  if (!std::filesystem::exists(path)) return {};
  std::vector<Document> pdf, other;
  std::size_t record = 0;
  detail::for_each_jsonl(path, [&](const json& j, std::size_t) {
    const std::string loc = where(path, record++);
    guarded(loc, [&] {
      Document d;
      d.company_id = company.id;
      const auto kind = parse_source_kind(detail::field_or<std::string>(j, "source", "report"));
      if (!kind || (*kind != SourceKind::kReport && *kind != SourceKind::kWeb)) {
        invalid(loc, "source must be report or web");
      }
      d.source = *kind;
      d.text = j.at("text").get<std::string>();
      if (j.contains("uri")) d.uri = j.at("uri").get<std::string>();
      if (j.contains("retrieved_at")) d.retrieved_at = Date::parse(j.at("retrieved_at").get<std::string>());
      try {
        validate(d);
      } catch (const Error& e) {
        invalid(loc, e.what());
      }
      const bool is_pdf = detail::field_or<std::string>(j, "format", "") == "pdf";
      (is_pdf ? pdf : other).push_back(std::move(d));
      return 0;
    });
  });
  pdf.insert(pdf.end(), std::make_move_iterator(other.begin()), std::make_move_iterator(other.end()));
  return pdf;
}

std::optional<Document> FixtureWikiProvider::description(const Company& company) const {
  require_name(company);
  const auto path = company_file(root_, "wikipedia", company);
  if (!std::filesystem::exists(path)) return std::nullopt;
  std::optional<Document> out;
  std::size_t record = 0;
  detail::for_each_jsonl(path, [&](const json& j, std::size_t) {
    const std::string loc = where(path, record++);
    if (out) invalid(loc, "at most one wikipedia record per company");
    guarded(loc, [&] {
      Document d;
      d.company_id = company.id;
      d.source = SourceKind::kWikipedia;
      d.text = j.at("text").get<std::string>();
      if (j.contains("uri")) d.uri = j.at("uri").get<std::string>();
      if (j.contains("retrieved_at")) d.retrieved_at = Date::parse(j.at("retrieved_at").get<std::string>());
      try {
        validate(d);
      } catch (const Error& e) {
        invalid(loc, e.what());
      }
      out = std::move(d);
      return 0;
    });
  });
  return out;
}

std::vector<NewsArticle> FixtureNewsProvider::news_for(const Company& company, int year) const {
  require_name(company);
  const auto path = company_file(root_, "news", company);
  if (!std::filesystem::exists(path)) return {};
  std::vector<NewsArticle> out;
  std::size_t record = 0;
  detail::for_each_jsonl(path, [&](const json& j, std::size_t) {
    const std::string loc = where(path, record++);
    guarded(loc, [&] {
      NewsArticle a;
      a.company_id = company.id;
      a.headline = j.at("headline").get<std::string>();
      if (j.contains("body") && !j.at("body").is_null()) a.body = j.at("body").get<std::string>();
      a.sentiment = j.at("sentiment").get<double>();
      a.magnitude = j.at("magnitude").get<double>();
      a.mention_count = j.at("mention_count").get<int>();
      a.published = Date::parse(j.at("published").get<std::string>());
      try {
        validate(a);
      } catch (const Error& e) {
        invalid(loc, e.what());
      }
      if (a.published.year == year) out.push_back(std::move(a));
      return 0;
    });
  });
  return out;
}

Providers fixture_providers(const std::filesystem::path& root) {
  return {std::make_shared<FixtureSearchProvider>(root), std::make_shared<FixtureWikiProvider>(root),
          std::make_shared<FixtureNewsProvider>(root)};
}

std::filesystem::path fixture_root(const std::filesystem::path& fallback) {
  if (const char* env = std::getenv("SDG_FIXTURE_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return fallback;
}

std::vector<Company> load_companies(const std::filesystem::path& path) {
  std::vector<Company> out;
  std::size_t record = 0;
  detail::for_each_jsonl(path, [&](const json& j, std::size_t) {
    const std::string loc = where(path, record++);
    guarded(loc, [&] {
      Company c;
      c.id = j.at("id").get<std::string>();
      c.name = detail::field_or<std::string>(j, "name", "");
      if (j.contains("kg_entity") && !j.at("kg_entity").is_null()) {
        c.kg_entity = j.at("kg_entity").get<std::string>();
      }
      if (j.contains("sector") && !j.at("sector").is_null()) c.sector = j.at("sector").get<std::string>();
      try {
        validate(c);
      } catch (const Error& e) {
        invalid(loc, e.what());
      }
      out.push_back(std::move(c));
      return 0;
    });
  });
  std::vector<std::string> ids;
  for (const auto& c : out) ids.push_back(c.id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw Error(ErrorKind::kParse, path.string() + ": duplicate company id");
  }
  return out;
}

}  // namespace sdg::ingest
