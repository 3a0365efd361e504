// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdg/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "sdg/error.hpp"

namespace sdg::eval {

ConfusionMatrix::ConfusionMatrix(int classes) : classes_(classes) {
  if (classes < 1) throw Error(ErrorKind::kInvalidArgument, "confusion matrix needs >= 1 class");
  counts_.assign(static_cast<std::size_t>(classes) * classes, 0);
}

std::size_t ConfusionMatrix::index(int truth, int pred) const {
  if (truth < 0 || truth >= classes_ || pred < 0 || pred >= classes_) {
    throw Error(ErrorKind::kInvalidArgument, "class index out of range: (" + std::to_string(truth) +
                                                 ", " + std::to_string(pred) + ")");
  }
  return static_cast<std::size_t>(truth) * classes_ + pred;
}

void ConfusionMatrix::add(int truth, int pred, long long n) { counts_[index(truth, pred)] += n; }

long long ConfusionMatrix::total() const {
  long long s = 0;
  for (long long v : counts_) s += v;
  return s;
}

long long ConfusionMatrix::trace() const {
  long long s = 0;
  for (int c = 0; c < classes_; ++c) s += at(c, c);
  return s;
}

long long ConfusionMatrix::row_sum(int truth) const {
  long long s = 0;
  for (int p = 0; p < classes_; ++p) s += at(truth, p);
  return s;
}

long long ConfusionMatrix::col_sum(int pred) const {
  long long s = 0;
  for (int t = 0; t < classes_; ++t) s += at(t, pred);
  return s;
}

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> pred, int classes) {
  if (truth.size() != pred.size()) {
    throw Error(ErrorKind::kInvalidArgument, "confusion: " + std::to_string(truth.size()) +
                                                 " true labels vs " + std::to_string(pred.size()) +
                                                 " predictions");
  }
  ConfusionMatrix cm(classes);
  for (std::size_t i = 0; i < truth.size(); ++i) cm.add(truth[i], pred[i]);
  return cm;
}

double class_f1(const ConfusionMatrix& cm, int c) {
  const long long tp = cm.at(c, c);
  const long long denom = cm.row_sum(c) + cm.col_sum(c);  // 2tp + fp + fn
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

double micro_f1(const ConfusionMatrix& cm) {
  const long long n = cm.total();
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "micro_f1 of an empty confusion matrix");
  return static_cast<double>(cm.trace()) / static_cast<double>(n);
}

double macro_f1(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorKind::kInvalidArgument, "macro_f1 of an empty confusion matrix");
  double s = 0.0;
  for (int c = 0; c < cm.classes(); ++c) s += class_f1(cm, c);
  return s / cm.classes();
}

ResultTable::ResultTable(std::span<const SdgResult> results) : results_(results.begin(), results.end()) {
  for (const auto& r : results_) {
    if (std::find(sdgs_.begin(), sdgs_.end(), r.sdg) == sdgs_.end()) sdgs_.push_back(r.sdg);
    if (std::find(models_.begin(), models_.end(), r.model) == models_.end()) models_.push_back(r.model);
  }
  std::sort(sdgs_.begin(), sdgs_.end());
}

const SdgResult* ResultTable::find(int sdg, const std::string& model) const {
  for (const auto& r : results_) {
    if (r.sdg == sdg && r.model == model) return &r;
  }
  return nullptr;
}

double ResultTable::average(const std::string& model, bool micro) const {
  double s = 0.0;
  int n = 0;
  for (int sdg : sdgs_) {
    if (const SdgResult* r = find(sdg, model)) {
      s += micro ? r->micro_f1 : r->macro_f1;
      ++n;
    }
  }
  return n == 0 ? 0.0 : s / n;
}

double ResultTable::average_micro(const std::string& model) const { return average(model, true); }
double ResultTable::average_macro(const std::string& model) const { return average(model, false); }

namespace {

std::string full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string two(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void ResultTable::write_csv(std::ostream& out) const {
  out << "sdg,model,micro_f1,macro_f1\n";
  for (int sdg : sdgs_) {
    for (const auto& m : models_) {
      if (const SdgResult* r = find(sdg, m)) {
        out << sdg << ',' << m << ',' << full(r->micro_f1) << ',' << full(r->macro_f1) << '\n';
      }
    }
  }
  for (const auto& m : models_) {
    out << "Average," << m << ',' << full(average_micro(m)) << ',' << full(average_macro(m)) << '\n';
  }
}

void ResultTable::write_text(std::ostream& out) const {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head1 = {"SDG"};
  std::vector<std::string> head2 = {""};
  for (const char* kind : {"Micro F1", "Macro F1"}) {
    for (std::size_t i = 0; i < models_.size(); ++i) {
      head1.push_back(i == 0 ? kind : "");
      head2.push_back(models_[i]);
    }
  }
  rows.push_back(head1);
  rows.push_back(head2);
  auto cells = [&](std::string label, auto value) {
    std::vector<std::string> row = {std::move(label)};
    for (bool micro : {true, false}) {
      for (const auto& m : models_) row.push_back(value(m, micro));
    }
    rows.push_back(std::move(row));
  };
  for (int sdg : sdgs_) {
    cells(std::to_string(sdg), [&](const std::string& m, bool micro) {
      const SdgResult* r = find(sdg, m);
      return r ? two(micro ? r->micro_f1 : r->macro_f1) : std::string("-");
    });
  }
  const std::size_t average_row = rows.size();
  cells("Average", [&](const std::string& m, bool micro) { return two(average(m, micro)); });

  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  auto rule = [&] {
    std::size_t n = 0;
    for (auto w : width) n += w + 2;
    out << std::string(n - 2, '-') << '\n';
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 2 || i == average_row) rule();
    std::string line;
    for (std::size_t c = 0; c < rows[i].size(); ++c) {
      const auto& s = rows[i][c];
      std::string pad(width[c] - s.size(), ' ');
      line += c == 0 ? s + pad : pad + s;
      if (c + 1 < rows[i].size()) line += "  ";
    }
    out << line << '\n';
  }
}

ResultTable per_sdg_report(std::span<const SdgResult> results) { return ResultTable(results); }

}  // namespace sdg::eval
