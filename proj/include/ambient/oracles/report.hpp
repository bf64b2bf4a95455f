// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "ambient/numerics/kv_file.hpp"

namespace ambient {

/// Outcome of one verifier run. `pass` records whether `estimate` satisfied
/// the claim at `tolerance` (the direction depends on the claim).
struct OracleReport {
  std::string claim;
  double estimate = 0.0;
  double tolerance = 0.0;
  double stderr_ = 0.0;
  double reference = 0.0;  // exact value when one is known, NaN otherwise
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  bool pass = false;

  KeyValues to_kv() const;
};

}  // namespace ambient
