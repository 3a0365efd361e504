// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdg/common.hpp"

#include <string>

#include "sdg/error.hpp"

namespace sdg {

namespace {

constexpr std::array<std::string_view, 17> kGoalStatements = {
    "End poverty in all its forms everywhere",
    "End hunger, achieve food security and improved nutrition and promote "
    "sustainable agriculture",
    "Ensure healthy lives and promote well-being for all at all ages",
    "Ensure inclusive and equitable quality education and promote lifelong "
    "learning opportunities for all",
    "Achieve gender equality and empower all women and girls",
    "Ensure availability and sustainable management of water and sanitation "
    "for all",
    "Ensure access to affordable, reliable, sustainable and modern energy for "
    "all",
    "Promote sustained, inclusive and sustainable economic growth, full and "
    "productive employment and decent work for all",
    "Build resilient infrastructure, promote inclusive and sustainable "
    "industrialization and foster innovation",
    "Reduce inequality within and among countries",
    "Make cities and human settlements inclusive, safe, resilient and "
    "sustainable",
    "Ensure sustainable consumption and production patterns",
    "Take urgent action to combat climate change and its impacts",
    "Conserve and sustainably use the oceans, seas and marine resources for "
    "sustainable development",
    "Protect, restore and promote sustainable use of terrestrial ecosystems, "
    "sustainably manage forests, combat desertification, and halt and reverse "
    "land degradation and halt biodiversity loss",
    "Promote peaceful and inclusive societies for sustainable development, "
    "provide access to justice for all and build effective, accountable and "
    "inclusive institutions at all levels",
    "Strengthen the means of implementation and revitalize the Global "
    "Partnership for Sustainable Development",
};

}  // namespace

int encode_score(int score) {
  if (!is_valid_score(score)) {
    throw Error(ErrorKind::kInvalidArgument,
                "score out of range [-3, 3]: " + std::to_string(score));
  }
  return score - kMinScore;
}

int decode_class(int class_index) {
  if (class_index < 0 || class_index >= kNumClasses) {
    throw Error(ErrorKind::kInvalidArgument,
                "class index out of range [0, 6]: " + std::to_string(class_index));
  }
  return class_index + kMinScore;
}

std::string_view sdg_goal_statement(int sdg) {
  if (sdg < 1 || sdg > 17) {
    throw Error(ErrorKind::kInvalidArgument, "no such SDG: " + std::to_string(sdg));
  }
  return kGoalStatements[static_cast<std::size_t>(sdg - 1)];
}

int argmax(const ProbabilityVector& p) {
  int best = 0;
  for (int c = 1; c < kNumClasses; ++c) {
    if (p[c] > p[best]) best = c;
  }
  return best;
}

}  // namespace sdg
