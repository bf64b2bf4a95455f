// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/oracles/report.hpp"

namespace ambient {

KeyValues OracleReport::to_kv() const {
  KeyValues kv;
  kv.set("claim", claim);
  kv.set("estimate", estimate);
  kv.set("tolerance", tolerance);
  kv.set("stderr", stderr_);
  kv.set("reference", reference);
  kv.set("trials", static_cast<std::uint64_t>(trials));
  kv.set("seed", seed);
  kv.set("pass", pass);
  return kv;
}

}  // namespace ambient
