// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace sdg {

// Alignment scores run from -3 (strongly misaligned) to +3 (strongly
// aligned); classifiers see them as class indices 0..6.
inline constexpr int kNumClasses = 7;
inline constexpr int kMinScore = -3;
inline constexpr int kMaxScore = 3;

// Goals 4, 10 and 17 lack enough labeled companies and are not modeled.
inline constexpr std::array<int, 14> kSupportedSdgs = {1, 2,  3,  5,  6,  7,  8,
                                                       9, 11, 12, 13, 14, 15, 16};

constexpr bool is_supported_sdg(int sdg) {
  for (int s : kSupportedSdgs) {
    if (s == sdg) return true;
  }
  return false;
}

constexpr bool is_valid_score(int score) {
  return score >= kMinScore && score <= kMaxScore;
}

// Throws sdg::Error(kInvalidArgument) outside [-3, 3].
int encode_score(int score);
// Throws sdg::Error(kInvalidArgument) outside [0, 6].
int decode_class(int class_index);

// Official goal statement, used as the entailment reference for an SDG.
// Valid for 1..17.
std::string_view sdg_goal_statement(int sdg);

using ProbabilityVector = std::array<double, kNumClasses>;

// argmax with ties broken toward the lower index.
int argmax(const ProbabilityVector& p);

}  // namespace sdg
