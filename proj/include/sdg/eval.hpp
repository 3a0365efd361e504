// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sdg/common.hpp"

namespace sdg::eval {

// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int classes = kNumClasses);

  int classes() const { return classes_; }
  long long at(int truth, int pred) const { return counts_[index(truth, pred)]; }
  void add(int truth, int pred, long long n = 1);
  long long total() const;
  long long trace() const;
  long long row_sum(int truth) const;
  long long col_sum(int pred) const;

 private:
  std::size_t index(int truth, int pred) const;

  int classes_;
  std::vector<long long> counts_;
};

// Throws sdg::Error(kInvalidArgument) on length mismatch or a class outside
// [0, classes).
ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> pred,
                          int classes = kNumClasses);

// F1 of one class; 0 when it has no true and no predicted instances.
double class_f1(const ConfusionMatrix& cm, int c);
// trace / total. Throws sdg::Error(kInvalidArgument) for an empty matrix.
double micro_f1(const ConfusionMatrix& cm);
// Mean of class_f1 over all classes of the matrix.
double macro_f1(const ConfusionMatrix& cm);

struct SdgResult {
  int sdg = 0;
  std::string model;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
};

// SDG rows in ascending order, model columns in first-seen order, plus an
// Average row holding the plain mean over the SDG rows of each model.
class ResultTable {
 public:
  explicit ResultTable(std::span<const SdgResult> results);

  std::span<const int> sdgs() const { return sdgs_; }
  std::span<const std::string> models() const { return models_; }
  // nullptr when the cell is missing.
  const SdgResult* find(int sdg, const std::string& model) const;
  double average_micro(const std::string& model) const;
  double average_macro(const std::string& model) const;

  // `sdg,model,micro_f1,macro_f1`, full precision, Average rows last.
  void write_csv(std::ostream& out) const;
  // Aligned table: SDG | micro per model | macro per model, 2 decimals.
  void write_text(std::ostream& out) const;

 private:
  double average(const std::string& model, bool micro) const;

  std::vector<SdgResult> results_;
  std::vector<int> sdgs_;
  std::vector<std::string> models_;
};

ResultTable per_sdg_report(std::span<const SdgResult> results);

}  // namespace sdg::eval
