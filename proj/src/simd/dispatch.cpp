// Copyright 2026 The sdgscore Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>
#include <string>

#include "sdg/error.hpp"
#include "sdg/simd/kernels.hpp"

namespace sdg::simd {

namespace {

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return &scalar_kernels();
    case Isa::kAvx2: return avx2_kernels();
    case Isa::kNeon: return neon_kernels();
  }
  return nullptr;
}

const KernelTable* best_available() {
  if (const KernelTable* t = avx2_kernels()) return t;
  if (const KernelTable* t = neon_kernels()) return t;
  return &scalar_kernels();
}

const KernelTable* initial_table() {
  const char* env = std::getenv("SDG_SIMD");
  if (env == nullptr || std::string_view(env) == "auto") return best_available();
  const auto isa = parse_isa(env);
  if (!isa) {
    throw Error(ErrorKind::kConfig, std::string("SDG_SIMD: unknown backend '") +
                                        env + "' (scalar|avx2|neon|auto)");
  }
  const KernelTable* t = table_for(*isa);
  if (t == nullptr) {
    throw Error(ErrorKind::kConfig,
                std::string("SDG_SIMD: backend not available on this CPU: ") + env);
  }
  return t;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::kScalar;
  if (name == "avx2") return Isa::kAvx2;
  if (name == "neon") return Isa::kNeon;
  return std::nullopt;
}

bool isa_available(Isa isa) { return table_for(isa) != nullptr; }

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) {
  const KernelTable* t = table_for(isa);
  if (t == nullptr) {
    throw Error(ErrorKind::kInvalidArgument,
                "SIMD backend not available: " + std::string(isa_name(isa)));
  }
  current().store(t, std::memory_order_release);
}

}  // namespace sdg::simd
