// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdg/text.hpp"

#include <algorithm>
#include <array>

namespace sdg::text {

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c >= 0x80;
}

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Sorted for binary search.
constexpr std::array<std::string_view, 64> kStopwords = {
    "a",     "about", "all",   "also",  "among", "an",    "and",   "any",
    "are",   "as",    "at",    "be",    "been",  "being", "both",  "but",
    "by",    "can",   "could", "do",    "does",  "each",  "for",   "from",
    "had",   "has",   "have",  "he",    "her",   "his",   "i",     "in",
    "into",  "is",    "it",    "its",   "may",   "more",  "most",  "of",
    "on",    "or",    "our",   "over",  "she",   "so",    "such",  "than",
    "that",  "the",   "their", "them",  "these", "they",  "this",  "those",
    "to",    "us",    "was",   "we",    "were",  "which", "with",  "within",
};

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (is_word_byte(c)) {
      cur.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a')
                                         : static_cast<char>(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool is_stopword(std::string_view token) {
  return std::binary_search(kStopwords.begin(), kStopwords.end(), token);
}

std::vector<std::string> content_tokens(std::string_view text) {
  auto tokens = tokenize(text);
  std::erase_if(tokens, [](const std::string& t) { return is_stopword(t); });
  return tokens;
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (unsigned char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(c));
  }
  return out;
}

}  // namespace sdg::text
