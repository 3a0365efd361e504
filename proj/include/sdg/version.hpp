// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace sdg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sdg
