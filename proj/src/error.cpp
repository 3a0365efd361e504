// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdg/error.hpp"

namespace sdg {

std::string_view error_class_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return "CONFIG";
    case ErrorKind::kConfigPath: return "CONFIG_PATH";
    case ErrorKind::kIo: return "IO";
    case ErrorKind::kParse: return "PARSE";
    case ErrorKind::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorKind::kNotFound: return "NOT_FOUND";
    case ErrorKind::kNumeric: return "NUMERIC";
    case ErrorKind::kProviderUnavailable: return "PROVIDER_UNAVAILABLE";
    case ErrorKind::kQuotaExceeded: return "QUOTA_EXCEEDED";
  }
  return "UNKNOWN";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kConfigPath:
      return 2;
    case ErrorKind::kNumeric:
      return 4;
    case ErrorKind::kIo:
    case ErrorKind::kParse:
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kNotFound:
    case ErrorKind::kProviderUnavailable:
    case ErrorKind::kQuotaExceeded:
      return 3;
  }
  return 3;
}

}  // namespace sdg
