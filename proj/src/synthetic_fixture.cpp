// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "sdg/common.hpp"
#include "sdg/error.hpp"
#include "sdg/hash.hpp"
#include "sdg/ingest.hpp"
#include "sdg/rng.hpp"
#include "sdg/synthetic.hpp"

namespace sdg::synthetic {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Sector {
  const char* name;
  const char* industry;
  std::map<int, int> score;  // SDG -> typical score
  std::array<const char*, 3> words;
};

const std::array<Sector, 6> kSectors = {{
    {"renewables", "renewable energy", {{3, 0}, {7, 3}, {13, 2}}, {"turbine", "grid", "storage"}},
    {"oil-gas", "petroleum industry", {{3, -1}, {7, -2}, {13, -3}}, {"refinery", "pipeline", "drilling"}},
    {"coal", "coal mining", {{3, -2}, {7, -3}, {13, -3}}, {"mine", "tonnes", "export"}},
    {"pharma", "pharmaceutical industry", {{3, 3}, {7, 0}, {13, 0}}, {"clinical", "trial", "patients"}},
    {"banking", "financial services", {{3, 0}, {7, 1}, {13, 0}}, {"loans", "deposits", "clients"}},
    {"utilities", "electric utility", {{3, 0}, {7, 1}, {13, -1}}, {"customers", "network", "tariff"}},
}};

constexpr std::array<const char*, 10> kNameStems = {"Atlas", "Helio", "Nordic", "Terra", "Vireo",
                                                    "Castell", "Orion", "Lumen", "Brava", "Kestrel"};
constexpr std::array<const char*, 6> kNameTails = {"Power", "Petroleum", "Resources", "Pharma", "Bank", "Energie"};
constexpr std::array<const char*, 4> kLegalForms = {"AG", "plc", "Ltd", "SE"};
constexpr std::array<const char*, 8> kCities = {"Hamburg", "Lyon", "Leeds", "Turin",
                                                "Porto", "Bergen", "Graz", "Gdansk"};
constexpr std::array<const char*, 4> kCountries = {"Germany", "France", "United Kingdom", "Italy"};

constexpr std::array<const char*, 8> kFiller = {
    "The board met eleven times during the reporting period.",
    "Revenue grew in most regions despite currency headwinds.",
    "The annual general meeting approved the proposed dividend.",
    "Our employees completed a new digital training curriculum.",
    "The group simplified its reporting structure this year.",
    "Customer satisfaction scores improved across all segments.",
    "Management expects stable demand in the coming quarters.",
    "The audit committee reviewed internal control procedures.",
};

struct Templates {
  std::array<const char*, 3> positive;
  std::array<const char*, 3> negative;
  const char* neutral;
};

// `%s` is the company name, `%d` a number.
const std::map<int, Templates> kTemplates = {
    {3,
     {{"%s supplied %d million vaccine doses to hospital networks.",
       "The medicine portfolio of %s treats rare disease in %d countries.",
       "Healthcare programs run by %s lowered mortality in %d partner clinics."},
      {"Residents near %s sites reported health problems in %d villages.",
       "Air pollution from plants of %s raised disease rates in %d nearby towns.",
       "Safety incidents at %s caused %d injuries last year."},
      "Employees of %s can join a voluntary health check program in %d offices."}},
    {7,
     {{"%s operates %d wind farms and sells renewable electricity to households.",
       "Solar parks built by %s added %d MW of clean energy capacity.",
       "%s runs hydro and geothermal plants for %d percent of its power generation."},
      {"%s still relies on coal fired power generation at %d sites.",
       "%s expanded fossil electricity output by %d percent.",
       "New coal mines of %s will supply energy to %d export markets."},
      "%s meters energy use at its offices every %d days."}},
    {13,
     {{"%s cut greenhouse gas emissions by %d percent and targets net zero.",
       "A decarbonization plan at %s lowers the carbon footprint of %d products.",
       "Climate change adaptation projects of %s protect %d coastal sites."},
      {"Carbon emissions at %s rose %d percent as production increased.",
       "Flaring by %s released %d thousand tonnes of co2.",
       "%s lobbied against climate mitigation rules in %d countries."},
      "%s publishes a carbon disclosure covering %d facilities."}},
};

struct Headlines {
  std::array<const char*, 3> good;
  std::array<const char*, 3> bad;
};

const Headlines kHeadlines = {
    {"%s opens new wind farm", "%s wins award for clean operations", "%s expands vaccine access"},
    {"%s fined over plant emissions", "%s faces protest over coal expansion", "%s recalls products after safety probe"},
};

std::string fmt(const char* pattern, const std::string& name, int n) {
  const std::string p = pattern;
  const auto s = p.find("%s");
  const auto d = p.find("%d");
  std::string out;
  char num[16];
  std::snprintf(num, sizeof num, "%d", n);
  if (d == std::string::npos) {
    out = p.substr(0, s) + name + p.substr(s + 2);
  } else if (s < d) {
    out = p.substr(0, s) + name + p.substr(s + 2, d - s - 2) + num + p.substr(d + 2);
  } else {
    out = p.substr(0, d) + num + p.substr(d + 2, s - d - 2) + name + p.substr(s + 2);
  }
  return out;
}

void write_file(const fs::path& p, const std::string& content) {
  std::error_code ec;
  fs::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + p.string());
}

std::string date(int year, int month, int day) { return ingest::Date{year, month, day}.to_string(); }

struct FixtureCompany {
  std::string id;
  std::string name;
  std::string entity;  // empty for the unmapped company
  std::size_t sector = 0;
  std::size_t city = 0;
  std::map<int, int> scores;
};

}  // namespace

void write_company_fixture(const fs::path& dir, const FixtureOptions& o) {
  if (o.companies < 2) throw Error(ErrorKind::kInvalidArgument, "fixture needs at least 2 companies");
  for (int sdg : o.sdgs) {
    if (!kTemplates.count(sdg)) throw Error(ErrorKind::kInvalidArgument, "no fixture templates for SDG " + std::to_string(sdg));
  }
  Rng rng(o.seed);
  std::vector<FixtureCompany> cos;
  std::set<std::string> names;
  for (std::size_t i = 0; i < o.companies; ++i) {
    FixtureCompany c;
    char id[16];
    std::snprintf(id, sizeof id, "co%02zu", i + 1);
    c.id = id;
    c.sector = i % kSectors.size();
    do {
      c.name = std::string(kNameStems[rng.below(kNameStems.size())]) + " " + kNameTails[c.sector] + " " +
               kLegalForms[rng.below(kLegalForms.size())];
      if (names.count(c.name)) c.name += " " + std::to_string(i + 1);
    } while (names.count(c.name));
    names.insert(c.name);
    if (i + 1 < o.companies) c.entity = "Q" + std::to_string(1000 + i);
    c.city = static_cast<std::size_t>(rng.below(kCities.size()));
    for (int sdg : o.sdgs) {
      const int base = kSectors[c.sector].score.at(sdg);
      const double u = rng.uniform();
      const int noise = u < 0.15 ? -1 : (u > 0.85 ? 1 : 0);
      c.scores[sdg] = std::clamp(base + noise, -3, 3);
    }
    cos.push_back(std::move(c));
  }

  std::ostringstream companies, labels, kg;
  labels << "company_id,sdg,score\n";
  kg << "# synthetic knowledge graph: subject<TAB>relation<TAB>object\n";
  for (std::size_t s = 0; s < kSectors.size(); ++s) {
    kg << "Q" << 500 + s << "\tinstance of\tQ499\n";
  }
  for (std::size_t c = 0; c < kCities.size(); ++c) {
    kg << "Q" << 600 + c << "\tcountry\tQ" << 700 + c % kCountries.size() << "\n";
  }
  for (std::size_t k = 0; k < kCountries.size(); ++k) {
    kg << "Q" << 700 + k << "\tcontinent\tQ800\n";
    kg << "Q" << 700 + k << "\tofficial language\tQ" << 900 + k << "\n";
  }

  std::size_t subsidiary = 0;
  for (std::size_t i = 0; i < cos.size(); ++i) {
    const auto& c = cos[i];
    const Sector& sec = kSectors[c.sector];
    json cj = {{"id", c.id}, {"name", c.name}, {"sector", sec.name}};
    if (!c.entity.empty()) cj["kg_entity"] = c.entity;
    companies << cj.dump() << "\n";

    // Graph neighborhood: industry, headquarters, owners, subsidiaries.
    if (!c.entity.empty()) {
      kg << c.entity << "\tindustry\tQ" << 500 + c.sector << "\n";
      if (rng.bernoulli(0.3)) kg << c.entity << "\theadquarters location\tQ" << 600 + c.city << "\n";
      if (rng.bernoulli(0.4)) kg << c.entity << "\towned by\tQ" << 300 + rng.below(4) << "\n";
      const int subs = static_cast<int>(rng.below(3));
      for (int s = 0; s < subs; ++s) {
        const std::string sub = "Q" + std::to_string(2000 + subsidiary++);
        kg << c.entity << "\tsubsidiary\t" << sub << "\n";
        kg << sub << "\tindustry\tQ" << 500 + c.sector << "\n";
      }
      if (i > 0 && rng.bernoulli(0.15) && !cos[i - 1].entity.empty()) {
        kg << c.entity << "\towner of\t" << cos[i - 1].entity << "\n";
      }
    }

    // Report sentences: one per point of |score| per SDG, plus sector filler.
    std::vector<std::string> report;
    report.push_back(c.name + " is active in the " + sec.industry + " with " + sec.words[0] + " and " + sec.words[1] +
                     " operations.");
    for (int sdg : o.sdgs) {
      const Templates& t = kTemplates.at(sdg);
      const int score = c.scores.at(sdg);
      std::vector<std::size_t> order = {0, 1, 2};
      rng.shuffle(order);
      if (score == 0) {
        report.push_back(fmt(t.neutral, c.name, 2 + static_cast<int>(rng.below(40))));
      }
      for (int k = 0; k < std::abs(score); ++k) {
        const char* p = score > 0 ? t.positive[order[static_cast<std::size_t>(k)]] : t.negative[order[static_cast<std::size_t>(k)]];
        report.push_back(fmt(p, c.name, 2 + static_cast<int>(rng.below(90))));
      }
    }
    report.push_back("The " + std::string(sec.words[2]) + " business of " + c.name + " grew in " + kCities[c.city] +
                     " during the year.");
    for (int k = 0; k < 4; ++k) report.push_back(kFiller[rng.below(kFiller.size())]);
    rng.shuffle(report);
    // Split across a web page and a PDF report.
    std::ostringstream rep;
    const std::size_t half = report.size() / 2;
    std::string first, second;
    for (std::size_t k = 0; k < report.size(); ++k) {
      std::string& part = k < half ? first : second;
      if (!part.empty()) part += " ";
      part += report[k];
    }
    rep << json({{"source", "report"},
                 {"format", "pdf"},
                 {"text", second},
                 {"uri", "https://" + c.id + ".example/sustainability-report.pdf"},
                 {"retrieved_at", date(o.news_year + 1, 1, 15)}})
               .dump()
        << "\n";
    rep << json({{"source", "web"}, {"format", "html"}, {"text", first}, {"uri", "https://" + c.id + ".example/about"}})
               .dump()
        << "\n";
    write_file(dir / "reports" / (c.id + ".jsonl"), rep.str());

    if (i % 5 != 4) {
      const std::string wiki = c.name + " is a company in the " + sec.industry + " headquartered in " + kCities[c.city] +
                               ", " + kCountries[c.city % kCountries.size()] + ".";
      write_file(dir / "wikipedia" / (c.id + ".jsonl"),
                 json({{"text", wiki}, {"uri", "https://en.wikipedia.example/wiki/" + c.id}}).dump() + "\n");
    }

    // News: sentiment follows the mean score, with one repeated headline.
    double mean = 0.0;
    for (const auto& [sdg, s] : c.scores) mean += s;
    mean /= static_cast<double>(c.scores.size());
    std::ostringstream news;
    const int n_articles = 6 + static_cast<int>(rng.below(4));
    std::string last;
    for (int a = 0; a < n_articles; ++a) {
      const double sentiment = std::clamp(mean / 3.0 + rng.uniform(-0.5, 0.5), -1.0, 1.0);
      const auto& pool = sentiment >= 0 ? kHeadlines.good : kHeadlines.bad;
      std::string headline = a == 3 && !last.empty() ? last : fmt(pool[rng.below(pool.size())], c.name, 0);
      if (a != 3) headline += " in " + std::string(kCities[rng.below(kCities.size())]);
      last = headline;
      const int year = a == n_articles - 1 ? o.news_year - 1 : o.news_year;
      const double magnitude = std::round(rng.uniform(0.5, 3.0) * 100.0) / 100.0;
      news << json({{"headline", headline},
                    {"sentiment", std::round(sentiment * 100.0) / 100.0},
                    {"magnitude", magnitude},
                    {"mention_count", 1 + static_cast<int>(rng.below(40))},
                    {"published", date(year, 1 + a % 12, 1 + static_cast<int>(rng.below(28)))}})
                  .dump()
           << "\n";
    }
    write_file(dir / "news" / (c.id + ".jsonl"), news.str());
  }
  for (int sdg : o.sdgs) {
    for (const auto& c : cos) labels << c.id << "," << sdg << "," << c.scores.at(sdg) << "\n";
  }
  write_file(dir / "companies.jsonl", companies.str());
  write_file(dir / "labels.csv", labels.str());
  write_file(dir / "kg.tsv", kg.str());
}

void write_shaped_kg(const fs::path& dir, const KgShape& s, std::uint64_t seed) {
  if (s.entities < 2 || s.relations < 1 || s.relations > s.edges || s.entities - 1 > s.edges) {
    throw Error(ErrorKind::kInvalidArgument, "infeasible knowledge-graph shape");
  }
  const double max_edges = static_cast<double>(s.entities) * static_cast<double>(s.entities - 1) *
                           static_cast<double>(s.relations);
  if (static_cast<double>(s.edges) > 0.5 * max_edges) {
    throw Error(ErrorKind::kInvalidArgument, "knowledge-graph shape too dense");
  }
  Rng rng(seed);
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
  std::ostringstream out;
  std::size_t written = 0;
  auto relation = [&](std::size_t k) {
    if (k < s.relations) return k;
    // Skewed: low relation ids dominate, like real property usage.
    const double u = rng.uniform();
    return static_cast<std::size_t>(u * u * u * static_cast<double>(s.relations));
  };
  auto emit = [&](std::size_t a, std::size_t b) {
    const std::size_t r = relation(written);
    if (!seen.insert({a, r, b}).second) return false;
    out << "Q" << a << "\tP" << r << "\tQ" << b << "\n";
    ++written;
    return true;
  };
  // A random tree first so every entity occurs and the graph is connected.
  for (std::size_t i = 1; i < s.entities; ++i) {
    while (!emit(static_cast<std::size_t>(rng.below(i)), i)) {
    }
  }
  while (written < s.edges) {
    const auto a = static_cast<std::size_t>(rng.below(s.entities));
    const auto b = static_cast<std::size_t>(rng.below(s.entities));
    if (a != b) emit(a, b);
  }
  const fs::path kg = dir / "kg.tsv";
  write_file(kg, out.str());
  const json manifest = {{"entities", s.entities},
                         {"edges", s.edges},
                         {"relations", s.relations},
                         {"seed", seed},
                         {"fnv1a64", to_hex(fnv1a64_file(kg))}};
  write_file(dir / "kg.manifest.json", manifest.dump(2) + "\n");
}

}  // namespace sdg::synthetic
