// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sdg::text {

// Lowercased maximal runs of ASCII letters/digits. Bytes >= 0x80 count as
// word characters so UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text);

// Small English function-word list; negation words are deliberately absent.
bool is_stopword(std::string_view token);

// tokenize() minus stopwords.
std::vector<std::string> content_tokens(std::string_view text);

// Trims and collapses internal whitespace runs to one space.
std::string normalize_whitespace(std::string_view text);

}  // namespace sdg::text
