// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sdg {

// Broad failure categories. The CLI maps these onto exit codes, so new kinds
// must also be added to `exit_code_for`.
enum class ErrorKind {
  kConfig,           // malformed or inconsistent configuration
  kConfigPath,       // a configured path does not exist
  kIo,               // read/write failure
  kParse,            // malformed input record
  kInvalidArgument,  // precondition violated by a caller
  kNotFound,         // unknown id
  kNumeric,          // non-finite loss or parameters
  kProviderUnavailable,
  kQuotaExceeded,
};

std::string_view error_class_name(ErrorKind kind);

// 2 configuration, 3 data, 4 numeric.
int exit_code_for(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  // Provider errors of this kind may succeed on a later attempt.
  bool retryable() const { return kind_ == ErrorKind::kProviderUnavailable; }

 private:
  ErrorKind kind_;
};

}  // namespace sdg
