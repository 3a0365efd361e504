// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdg/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "jsonl.hpp"
#include "sdg/common.hpp"
#include "sdg/error.hpp"
#include "sdg/hash.hpp"
#include "sdg/rng.hpp"
#include "sdg/text.hpp"

namespace sdg::features {

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<int> df)
    : terms_(std::move(terms)), df_(std::move(df)) {
  if (df_.size() != terms_.size()) {
    throw Error(ErrorKind::kInvalidArgument, "vocabulary: terms and df differ in length");
  }
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], i).second) {
      throw Error(ErrorKind::kInvalidArgument, "vocabulary: duplicate term " + terms_[i]);
    }
  }
}

std::optional<std::size_t> Vocabulary::find(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Vocabulary::hash() const {
  Fnv1a h;
  for (const auto& t : terms_) h.update(t).update("\n");
  return h.digest();
}

Vocabulary build_vocabulary(std::span<const std::string> texts, int min_df, std::size_t max_size) {
  if (min_df < 1) throw Error(ErrorKind::kInvalidArgument, "min_df must be >= 1");
  if (max_size < 1) throw Error(ErrorKind::kInvalidArgument, "max_size must be >= 1");
  std::unordered_map<std::string, int> df;
  for (const auto& text : texts) {
    auto tokens = text::tokenize(text);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (auto& t : tokens) ++df[std::move(t)];
  }
  std::vector<std::pair<std::string, int>> kept;
  for (auto& [t, d] : df) {
    if (d >= min_df) kept.emplace_back(t, d);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (kept.size() > max_size) kept.resize(max_size);
  std::vector<std::string> terms;
  std::vector<int> counts;
  for (auto& [t, d] : kept) {
    terms.push_back(std::move(t));
    counts.push_back(d);
  }
  return Vocabulary(std::move(terms), std::move(counts));
}

Vocabulary build_vocabulary(std::span<const ingest::Document> docs, int min_df, std::size_t max_size) {
  std::vector<std::string> texts;
  texts.reserve(docs.size());
  for (const auto& d : docs) texts.push_back(d.text);
  return build_vocabulary(texts, min_df, max_size);
}

SparseRow featurize(const Vocabulary& vocab, std::string_view text) {
  SparseRow row;
  for (const auto& t : text::tokenize(text)) {
    if (auto c = vocab.find(t)) ++row[*c];
  }
  return row;
}

SparseRow featurize(const Vocabulary& vocab, std::span<const std::string> texts) {
  SparseRow row;
  for (const auto& text : texts) {
    for (auto [c, n] : featurize(vocab, text)) row[c] += n;
  }
  return row;
}

std::optional<std::size_t> FeatureMatrix::find_row(std::string_view id) const {
  auto it = std::find(row_ids.begin(), row_ids.end(), id);
  if (it == row_ids.end()) return std::nullopt;
  return static_cast<std::size_t>(it - row_ids.begin());
}

const SparseRow& FeatureMatrix::row(std::string_view id) const {
  auto i = find_row(id);
  if (!i) throw Error(ErrorKind::kNotFound, "no feature row for company " + std::string(id));
  return rows[*i];
}

Matrix FeatureMatrix::dense(std::span<const std::string> ids) const {
  const std::size_t n = ids.empty() ? rows.size() : ids.size();
  Matrix out(n, vocab.size());
  for (std::size_t r = 0; r < n; ++r) {
    const SparseRow& src = ids.empty() ? rows[r] : row(ids[r]);
    for (auto [c, v] : src) out(r, c) = v;
  }
  return out;
}

std::vector<double> to_dense(const SparseRow& row, std::size_t width) {
  std::vector<double> out(width, 0.0);
  for (auto [c, v] : row) {
    if (c >= width) throw Error(ErrorKind::kInvalidArgument, "feature column out of range");
    out[c] = v;
  }
  return out;
}

std::vector<std::string> LabelVector::mask() const {
  std::vector<std::string> out;
  out.reserve(values.size());
  for (const auto& [id, _] : values) out.push_back(id);
  return out;
}

Split stratified_split(const LabelVector& labels, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "test_fraction must be in (0, 1)");
  }
  std::map<int, std::vector<std::string>> by_class;  // members ascending (map order)
  for (const auto& [id, c] : labels.values) by_class[c].push_back(id);

  Split split;
  Rng rng(seed);
  for (auto& [cls, members] : by_class) {
    const std::size_t c = members.size();
    if (c == 1) {
      split.train.push_back(members[0]);
      split.warnings.push_back("SDG " + std::to_string(labels.sdg) + ": class " +
                               std::to_string(decode_class(cls)) +
                               " has a single member; kept in train");
      continue;
    }
    auto t = static_cast<std::size_t>(std::round(static_cast<double>(c) * test_fraction));
    t = std::clamp<std::size_t>(t, 1, c - 1);
    rng.shuffle(members);
    split.test.insert(split.test.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(t));
    split.train.insert(split.train.end(), members.begin() + static_cast<std::ptrdiff_t>(t), members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

void write_vocabulary(const Vocabulary& vocab, std::ostream& out) {
  for (std::size_t i = 0; i < vocab.size(); ++i) out << vocab.term(i) << '\t' << vocab.df(i) << '\n';
}

Vocabulary read_vocabulary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open vocabulary " + path.string());
  std::vector<std::string> terms;
  std::vector<int> df;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    try {
      if (tab == std::string::npos || tab == 0) throw std::invalid_argument("expected term<TAB>df");
      terms.push_back(line.substr(0, tab));
      df.push_back(std::stoi(line.substr(tab + 1)));
    } catch (const std::exception& e) {
      throw Error(ErrorKind::kParse, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return Vocabulary(std::move(terms), std::move(df));
}

void write_rows_jsonl(const FeatureMatrix& fm, std::ostream& out) {
  for (std::size_t r = 0; r < fm.rows.size(); ++r) {
    // Columns in numeric order; nlohmann objects would sort the keys as strings.
    out << "{\"company_id\":" << nlohmann::json(fm.row_ids[r]).dump() << ",\"counts\":{";
    bool first = true;
    for (auto [c, v] : fm.rows[r]) {
      out << (first ? "" : ",") << '"' << c << "\":" << v;
      first = false;
    }
    out << "}}\n";
  }
}

FeatureMatrix read_feature_matrix(const std::filesystem::path& vocab_path,
                                  const std::filesystem::path& rows_path) {
  FeatureMatrix fm;
  fm.vocab = read_vocabulary(vocab_path);
  detail::for_each_jsonl(rows_path, [&](const nlohmann::json& j, std::size_t line) {
    try {
      SparseRow row;
      for (const auto& [k, v] : j.at("counts").items()) {
        const std::size_t c = std::stoul(k);
        const int n = v.get<int>();
        if (c >= fm.vocab.size() || n < 1) throw std::out_of_range("bad column or count " + k);
        row[c] = n;
      }
      fm.row_ids.push_back(j.at("company_id").get<std::string>());
      fm.rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      throw Error(ErrorKind::kParse, rows_path.string() + ":" + std::to_string(line) + ": " + e.what());
    }
  });
  return fm;
}

void write_labels_csv(std::span<const LabelVector> labels, std::ostream& out) {
  std::vector<const LabelVector*> sorted;
  for (const auto& l : labels) sorted.push_back(&l);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const LabelVector* a, const LabelVector* b) { return a->sdg < b->sdg; });
  out << "company_id,sdg,score\n";
  for (const LabelVector* l : sorted) {
    for (const auto& [id, c] : l->values) out << id << ',' << l->sdg << ',' << decode_class(c) << '\n';
  }
}

std::map<int, LabelVector> read_labels_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open labels " + path.string());
  std::map<int, LabelVector> out;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line.rfind("company_id", 0) == 0)) continue;
    auto fail = [&](const std::string& what) {
      throw Error(ErrorKind::kParse, path.string() + ":" + std::to_string(line_no) + ": " + what);
    };
    std::istringstream fields(line);
    std::string id, sdg_s, score_s, extra;
    if (!std::getline(fields, id, ',') || !std::getline(fields, sdg_s, ',') ||
        !std::getline(fields, score_s, ',') || std::getline(fields, extra, ',') || id.empty()) {
      fail("expected company_id,sdg,score");
    }
    int sdg = 0, score = 0;
    try {
      std::size_t p1 = 0, p2 = 0;
      sdg = std::stoi(sdg_s, &p1);
      score = std::stoi(score_s, &p2);
      if (p1 != sdg_s.size() || p2 != score_s.size()) fail("non-integer field");
    } catch (const std::logic_error&) {
      fail("non-integer field");
    }
    if (!is_supported_sdg(sdg)) fail("unsupported SDG " + sdg_s);
    if (!is_valid_score(score)) fail("score out of range " + score_s);
    LabelVector& lv = out[sdg];
    lv.sdg = sdg;
    if (!lv.values.emplace(id, encode_score(score)).second) fail("duplicate label for " + id);
  }
  return out;
}

}  // namespace sdg::features
