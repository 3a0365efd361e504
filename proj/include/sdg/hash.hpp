// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace sdg {

// 64-bit FNV-1a. Used for content fingerprints in manifests and model files,
// not for anything adversarial.
class Fnv1a {
 public:
  Fnv1a& update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      h_ ^= c;
      h_ *= 0x100000001b3ULL;
    }
    return *this;
  }
  std::uint64_t digest() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

inline std::uint64_t fnv1a64(std::string_view bytes) { return Fnv1a().update(bytes).digest(); }

// Throws sdg::Error(kIo) if the file cannot be read.
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

// 16 lowercase hex digits.
std::string to_hex(std::uint64_t v);

}  // namespace sdg
