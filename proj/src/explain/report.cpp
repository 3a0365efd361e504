// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <set>
#include <sstream>

#include "sdg/explain.hpp"
#include "sdg/text.hpp"

namespace sdg::explain {

namespace {

std::vector<std::string> matched_terms(const TermAttribution& terms, const std::string& sentence) {
  const auto tokens = text::tokenize(sentence);
  const std::set<std::string> present(tokens.begin(), tokens.end());
  std::vector<std::string> out;
  for (const auto& t : terms.terms) {
    if (present.count(t.term)) out.push_back(t.term);
  }
  return out;
}

std::string name_of(const NameLookup& names, const std::string& id) {
  auto it = names.find(id);
  return it == names.end() ? id : it->second;
}

std::string signed_score(int score) {
  return score > 0 ? "+" + std::to_string(score) : std::to_string(score);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string weight_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.4f", v);
  return buf;
}

}  // namespace

std::vector<relevance::Evidence> supporting_evidence(const TermAttribution& terms,
                                                     std::span<const relevance::Evidence> evidence) {
  std::vector<relevance::Evidence> out;
  for (const auto& e : evidence) {
    if (!matched_terms(terms, e.sentence).empty()) out.push_back(e);
  }
  return out;
}

nlohmann::json report_json(std::span<const ReportEntry> entries, const NameLookup& names) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : entries) {
    nlohmann::json probs = nlohmann::json::array();
    for (int c = 0; c < kNumClasses; ++c) probs.push_back({{"score", decode_class(c)}, {"probability", r.probs[c]}});
    nlohmann::json j = {{"company_id", r.company_id},
                        {"company_name", r.company_name.empty() ? r.company_id : r.company_name},
                        {"sdg", r.sdg},
                        {"model", r.model},
                        {"predicted_class", r.predicted_class},
                        {"predicted_score", decode_class(r.predicted_class)},
                        {"probabilities", std::move(probs)},
                        {"explanation_available", r.terms.has_value() || r.edges.has_value()}};
    nlohmann::json terms = nlohmann::json::array();
    if (r.terms) {
      for (const auto& t : r.terms->terms) terms.push_back({{"term", t.term}, {"weight", t.weight}});
    }
    j["terms"] = std::move(terms);
    nlohmann::json edges = nlohmann::json::array();
    if (r.edges) {
      for (const auto& e : r.edges->edges) {
        edges.push_back({{"source", e.a},
                         {"source_name", name_of(names, e.a)},
                         {"target", e.b},
                         {"target_name", name_of(names, e.b)},
                         {"weight", e.weight}});
      }
      j["fidelity"] = r.edges->fidelity;
    } else {
      j["fidelity"] = nullptr;
    }
    j["edges"] = std::move(edges);
    nlohmann::json ev = nlohmann::json::array();
    for (const auto& e : r.evidence) {
      ev.push_back({{"sentence", e.sentence},
                    {"score", e.score},
                    {"verdict", std::string(relevance::to_string(e.verdict.label))},
                    {"source", std::string(ingest::to_string(e.source))},
                    {"terms", r.terms ? matched_terms(*r.terms, e.sentence) : std::vector<std::string>{}}});
    }
    j["evidence"] = std::move(ev);
    list.push_back(std::move(j));
  }
  return {{"version", 1}, {"entries", std::move(list)}};
}

std::string report_markdown(std::span<const ReportEntry> entries, const NameLookup& names) {
  std::ostringstream out;
  for (const auto& r : entries) {
    const std::string name = r.company_name.empty() ? r.company_id : r.company_name;
    out << "## " << name << " (" << r.company_id << "), SDG " << r.sdg << "\n\n";
    out << "Predicted score " << signed_score(decode_class(r.predicted_class)) << " by " << r.model
        << " with probability " << fixed(r.probs[static_cast<std::size_t>(r.predicted_class)], 3) << ".\n\n";
    out << "| score | probability | |\n|---:|---:|:---|\n";
    for (int c = 0; c < kNumClasses; ++c) {
      const int bar = static_cast<int>(r.probs[c] * 20.0 + 0.5);
      out << "| " << signed_score(decode_class(c)) << " | " << fixed(r.probs[c], 3) << " | "
          << std::string(static_cast<std::size_t>(bar), '#') << " |\n";
    }
    out << "\n";
    if (!r.terms && !r.edges) {
      out << "_no explanation available_\n\n";
      continue;
    }
    if (r.terms) {
      out << "### Terms\n\n";
      if (r.terms->terms.empty()) out << "_no explanation available_\n";
      for (const auto& t : r.terms->terms) out << "- " << t.term << " (" << weight_text(t.weight) << ")\n";
      out << "\n";
    }
    if (r.edges) {
      out << "### Connections\n\n";
      if (r.edges->edges.empty()) out << "_no explanation available_\n";
      for (const auto& e : r.edges->edges) {
        out << "- " << name_of(names, e.a) << " -- " << name_of(names, e.b) << " (" << fixed(e.weight, 3) << ")\n";
      }
      out << "\nFidelity: " << fixed(r.edges->fidelity, 3) << "\n\n";
    }
    if (!r.evidence.empty()) {
      out << "### Evidence\n\n";
      for (const auto& e : r.evidence) out << "> " << e.sentence << "\n\n";
    }
  }
  return out.str();
}

}  // namespace sdg::explain
