// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "sdg/error.hpp"
#include "sdg/ingest.hpp"

using namespace sdg::ingest;

namespace {

const std::filesystem::path kRoot = std::filesystem::path(SDG_TEST_FIXTURES) / "ingest";
const std::filesystem::path kBad = std::filesystem::path(SDG_TEST_FIXTURES) / "ingest_bad";

Company company(std::string id, std::string name = "Some Company") {
  Company c;
  c.id = std::move(id);
  c.name = std::move(name);
  return c;
}

}  // namespace

TEST_CASE("source kinds round-trip") {
  for (auto k : {SourceKind::kReport, SourceKind::kWeb, SourceKind::kWikipedia, SourceKind::kNews}) {
    CHECK(parse_source_kind(to_string(k)) == k);
  }
  CHECK_FALSE(parse_source_kind("tweet").has_value());
}

TEST_CASE("dates") {
  const Date d = Date::parse("2021-03-07");
  CHECK(d.year == 2021);
  CHECK(d.month == 3);
  CHECK(d.day == 7);
  CHECK(d.to_string() == "2021-03-07");
  CHECK(Date::parse("2020-12-31") < d);
  CHECK_THROWS_AS(Date::parse("2021-13-01"), sdg::Error);
  CHECK_THROWS_AS(Date::parse("21-1-1"), sdg::Error);
}

TEST_CASE("record validation") {
  Company c = company("x");
  c.labels = {{7, 3}};
  CHECK_NOTHROW(validate(c));
  c.labels = {{4, 1}};
  CHECK_THROWS_AS(validate(c), sdg::Error);
  c.labels = {{7, 4}};
  CHECK_THROWS_AS(validate(c), sdg::Error);

  Document d;
  d.text = "  ";
  CHECK_THROWS_AS(validate(d), sdg::Error);

  NewsArticle a;
  a.headline = "h";
  a.sentiment = -1.0;
  CHECK_NOTHROW(validate(a));
  a.magnitude = -0.1;
  CHECK_THROWS_AS(validate(a), sdg::Error);
}

TEST_CASE("companies file") {
  const auto cs = load_companies(kRoot / "companies.jsonl");
  REQUIRE(cs.size() == 4);
  CHECK(cs[0].id == "acme");
  CHECK(cs[0].kg_entity == "Q100");
  CHECK(cs[2].sector == std::nullopt);
}

TEST_CASE("report search") {
  FixtureSearchProvider p(kRoot);
  SUBCASE("stored records in stable order") {
    const auto docs = p.find_reports(company("acme"));
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].uri == "https://acme.example/report-2021.pdf");
    CHECK(docs[0].retrieved_at == Date{2022, 1, 15});
    CHECK(docs[1].uri == "https://acme.example/report-2020.pdf");
    CHECK(p.find_reports(company("acme"))[1].text == docs[1].text);
  }
  SUBCASE("missing company") { CHECK(p.find_reports(company("nobody")).empty()); }
  SUBCASE("pdf text first") {
    const auto docs = p.find_reports(company("mixed"));
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].source == SourceKind::kReport);
    CHECK(docs[1].source == SourceKind::kWeb);
  }
  SUBCASE("company needs a name") { CHECK_THROWS_AS(p.find_reports(company("acme", "")), sdg::Error); }
}

TEST_CASE("wikipedia descriptions") {
  FixtureWikiProvider p(kRoot);
  const auto sgl = p.description(company("sgl", "SGL Carbon SE"));
  REQUIRE(sgl.has_value());
  CHECK(sgl->source == SourceKind::kWikipedia);
  CHECK(sgl->text.find("one of the worlds leading manufacturers") != std::string::npos);
  CHECK_FALSE(p.description(company("quiet")).has_value());
  CHECK_THROWS_AS(FixtureWikiProvider(kBad).description(company("acme")), sdg::Error);
}

TEST_CASE("news by year") {
  FixtureNewsProvider p(kRoot);
  CHECK(p.news_for(company("acme"), 2021).size() == 7);
  CHECK(p.news_for(company("acme"), 2020).size() == 1);
  CHECK(p.news_for(company("acme"), 2019).empty());
  CHECK(p.news_for(company("quiet"), 2021).empty());

  FixtureNewsProvider bad(kBad);
  try {
    bad.news_for(company("acme"), 2021);
    FAIL("expected a validation error");
  } catch (const sdg::Error& e) {
    CHECK(e.kind() == sdg::ErrorKind::kParse);
    CHECK(std::string(e.what()).find("record 1") != std::string::npos);
    CHECK(std::string(e.what()).find("sentiment") != std::string::npos);
  }
}

TEST_CASE("fixture root honours the environment") {
  ::setenv("SDG_FIXTURE_DIR", "/tmp/elsewhere", 1);
  CHECK(fixture_root("/fallback") == "/tmp/elsewhere");
  ::unsetenv("SDG_FIXTURE_DIR");
  CHECK(fixture_root("/fallback") == "/fallback");
}
