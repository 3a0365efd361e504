// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "sdg/error.hpp"
#include "sdg/eval.hpp"
#include "sdg/rng.hpp"

using namespace sdg::eval;

namespace {

// Precision/recall formulation, kept independent of the library code.
double oracle_micro(const std::vector<int>& t, const std::vector<int>& p) {
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == p[i]) {
      tp += 1;
    } else {
      fp += 1;  // counted against the predicted class
      fn += 1;  // and missed for the true class
    }
  }
  const double prec = tp / (tp + fp);
  const double rec = tp / (tp + fn);
  return prec + rec == 0 ? 0.0 : 2 * prec * rec / (prec + rec);
}

double oracle_macro(const std::vector<int>& t, const std::vector<int>& p, int classes) {
  double sum = 0;
  for (int c = 0; c < classes; ++c) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (p[i] == c && t[i] == c) tp += 1;
      if (p[i] == c && t[i] != c) fp += 1;
      if (p[i] != c && t[i] == c) fn += 1;
    }
    const double prec = tp + fp == 0 ? 0.0 : tp / (tp + fp);
    const double rec = tp + fn == 0 ? 0.0 : tp / (tp + fn);
    sum += prec + rec == 0 ? 0.0 : 2 * prec * rec / (prec + rec);
  }
  return sum / classes;
}

}  // namespace

TEST_CASE("confusion counts") {
  const std::vector<int> a = {0, 1, 2};
  const auto cm = confusion(a, a);
  for (int c = 0; c < 3; ++c) CHECK(cm.at(c, c) == 1);
  CHECK(cm.total() == 3);
  const std::vector<int> t = {0}, p = {6};
  const auto one = confusion(t, p);
  CHECK(one.at(0, 6) == 1);
  CHECK(one.trace() == 0);
  CHECK_THROWS_AS(confusion(a, t), sdg::Error);
  const std::vector<int> bad = {7};
  CHECK_THROWS_AS(confusion(bad, bad), sdg::Error);

  sdg::Rng rng(3);
  std::vector<int> rt(20), rp(20);
  for (int i = 0; i < 20; ++i) {
    rt[i] = static_cast<int>(rng.below(7));
    rp[i] = static_cast<int>(rng.below(7));
  }
  CHECK(confusion(rt, rp).total() == 20);
}

TEST_CASE("hand-derived F1 examples") {
  const std::vector<int> perfect = {0, 1, 2, 3, 4, 5, 6};
  const auto cm = confusion(perfect, perfect);
  CHECK(micro_f1(cm) == 1.0);
  CHECK(macro_f1(cm) == doctest::Approx(1.0 / 7 * 7).epsilon(1e-15));

  std::vector<int> truth, zeros(70, 0);
  for (int c = 0; c < 7; ++c) truth.insert(truth.end(), 10, c);
  const auto all0 = confusion(truth, zeros);
  CHECK(micro_f1(all0) == doctest::Approx(1.0 / 7).epsilon(1e-12));
  CHECK(std::abs(macro_f1(all0) - 0.25 / 7) <= 1e-9);

  const std::vector<int> t2 = {0, 0, 1}, p2 = {0, 1, 1};
  const auto two = confusion(t2, p2, 2);
  CHECK(std::abs(micro_f1(two) - 2.0 / 3) <= 1e-9);
  CHECK(std::abs(macro_f1(two) - 2.0 / 3) <= 1e-9);

  CHECK_THROWS_AS(micro_f1(ConfusionMatrix()), sdg::Error);
  CHECK_THROWS_AS(macro_f1(ConfusionMatrix()), sdg::Error);
}

TEST_CASE("metrics against the precision-recall oracle") {
  sdg::Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(60);
    std::vector<int> t(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = static_cast<int>(rng.below(7));
      p[i] = rng.below(3) == 0 ? t[i] : static_cast<int>(rng.below(7));
    }
    const auto cm = confusion(t, p);
    const double mi = micro_f1(cm);
    const double ma = macro_f1(cm);
    CHECK(std::abs(mi - oracle_micro(t, p)) <= 1e-12);
    CHECK(std::abs(ma - oracle_macro(t, p, 7)) <= 1e-12);
    CHECK(mi >= 0.0);
    CHECK(mi <= 1.0);
    CHECK(ma >= 0.0);
    CHECK(ma <= 1.0);

    // Reordering examples changes nothing.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::vector<int> ts(n), ps(n);
    for (std::size_t i = 0; i < n; ++i) {
      ts[i] = t[order[i]];
      ps[i] = p[order[i]];
    }
    CHECK(micro_f1(confusion(ts, ps)) == mi);
    CHECK(macro_f1(confusion(ts, ps)) == doctest::Approx(ma).epsilon(1e-14));

    // Nor does a consistent relabeling of classes.
    std::vector<int> perm = {0, 1, 2, 3, 4, 5, 6};
    rng.shuffle(perm);
    for (std::size_t i = 0; i < n; ++i) {
      ts[i] = perm[t[i]];
      ps[i] = perm[p[i]];
    }
    CHECK(macro_f1(confusion(ts, ps)) == doctest::Approx(ma).epsilon(1e-14));
  }
}

TEST_CASE("result table") {
  SUBCASE("single SDG average equals the row") {
    const std::vector<SdgResult> r = {{7, "brf", 0.8, 0.3}};
    const auto t = per_sdg_report(r);
    CHECK(t.average_micro("brf") == 0.8);
    CHECK(t.average_macro("brf") == 0.3);
  }
  SUBCASE("two SDGs, two models") {
    const std::vector<SdgResult> r = {
        {13, "brf", 0.90, 0.20}, {7, "brf", 0.86, 0.15}, {7, "gcn", 0.85, 0.15}, {13, "gcn", 0.90, 0.17}};
    const auto t = per_sdg_report(r);
    CHECK(std::vector<int>(t.sdgs().begin(), t.sdgs().end()) == std::vector<int>{7, 13});
    CHECK(std::vector<std::string>(t.models().begin(), t.models().end()) ==
          std::vector<std::string>{"brf", "gcn"});
    CHECK(t.average_micro("brf") == doctest::Approx(0.88));
    CHECK(t.average_macro("gcn") == doctest::Approx(0.16));
    std::ostringstream csv;
    t.write_csv(csv);
    CHECK(csv.str() ==
          "sdg,model,micro_f1,macro_f1\n"
          "7,brf,0.85999999999999999,0.14999999999999999\n"
          "7,gcn,0.84999999999999998,0.14999999999999999\n"
          "13,brf,0.90000000000000002,0.20000000000000001\n"
          "13,gcn,0.90000000000000002,0.17000000000000001\n"
          "Average,brf,0.88,0.17499999999999999\n"
          "Average,gcn,0.875,0.16\n");
    std::ostringstream text;
    t.write_text(text);
    const std::string s = text.str();
    CHECK(s.find("Micro F1") != std::string::npos);
    std::istringstream avg(s.substr(s.find("Average")));
    std::vector<std::string> cells;
    for (std::string c; avg >> c;) cells.push_back(c);
    CHECK(cells == std::vector<std::string>{"Average", "0.88", "0.88", "0.17", "0.16"});
  }
}
