// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sdg/ingest.hpp"
#include "sdg/matrix.hpp"

// Bag-of-words rows per company, label vectors and stratified splits.
namespace sdg::features {

class Vocabulary {
 public:
  Vocabulary() = default;
  // `terms` must be unique; `df` is parallel to it.
  Vocabulary(std::vector<std::string> terms, std::vector<int> df);

  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  std::span<const std::string> terms() const { return terms_; }
  const std::string& term(std::size_t column) const { return terms_[column]; }
  int df(std::size_t column) const { return df_[column]; }
  std::optional<std::size_t> find(std::string_view term) const;

  // Fingerprint of the ordered term list, stored in model files.
  std::uint64_t hash() const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.terms_ == b.terms_ && a.df_ == b.df_;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<int> df_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Each text is one document for df purposes. Terms with df < min_df are
// dropped; the rest are ordered by (-df, term) and truncated to max_size.
// Throws sdg::Error(kInvalidArgument) if min_df or max_size is below 1.
Vocabulary build_vocabulary(std::span<const std::string> texts, int min_df = 2,
                            std::size_t max_size = 50000);
Vocabulary build_vocabulary(std::span<const ingest::Document> docs, int min_df = 2,
                            std::size_t max_size = 50000);

// column -> count (>= 1)
using SparseRow = std::map<std::size_t, int>;

SparseRow featurize(const Vocabulary& vocab, std::string_view text);
SparseRow featurize(const Vocabulary& vocab, std::span<const std::string> texts);

struct FeatureMatrix {
  Vocabulary vocab;
  std::vector<std::string> row_ids;
  std::vector<SparseRow> rows;

  std::size_t row_count() const { return rows.size(); }
  std::optional<std::size_t> find_row(std::string_view id) const;
  // Throws sdg::Error(kNotFound).
  const SparseRow& row(std::string_view id) const;
  // Dense copy of the given rows in the given order (all rows when empty).
  Matrix dense(std::span<const std::string> ids = {}) const;
};

std::vector<double> to_dense(const SparseRow& row, std::size_t width);

// Labels for one SDG; class index c encodes score c - 3.
struct LabelVector {
  int sdg = 0;
  std::map<std::string, int> values;  // company id -> class index

  bool contains(std::string_view id) const { return values.find(std::string(id)) != values.end(); }
  // Labeled companies, ascending.
  std::vector<std::string> mask() const;
  std::size_t size() const { return values.size(); }
};

struct Split {
  std::vector<std::string> train;  // ascending
  std::vector<std::string> test;   // ascending
  std::vector<std::string> warnings;
};

// Per class of size c, the test side takes round(c * test_fraction) members
// (half away from zero), clamped to [1, c - 1] when c >= 2. A class with one
// member goes to train and adds a warning. Throws sdg::Error(kInvalidArgument)
// unless 0 < test_fraction < 1.
Split stratified_split(const LabelVector& labels, double test_fraction, std::uint64_t seed);

// --- Files ------------------------------------------------------------------

// `term<TAB>df` per line in column order.
void write_vocabulary(const Vocabulary& vocab, std::ostream& out);
Vocabulary read_vocabulary(const std::filesystem::path& path);

// {"company_id": ..., "counts": {"<column>": count, ...}} per line.
void write_rows_jsonl(const FeatureMatrix& fm, std::ostream& out);
FeatureMatrix read_feature_matrix(const std::filesystem::path& vocab_path,
                                  const std::filesystem::path& rows_path);

// `company_id,sdg,score` with a header row; rows sorted by (sdg, company_id).
void write_labels_csv(std::span<const LabelVector> labels, std::ostream& out);
// SDG -> labels. Throws sdg::Error(kParse) naming the line.
std::map<int, LabelVector> read_labels_csv(const std::filesystem::path& path);

}  // namespace sdg::features
