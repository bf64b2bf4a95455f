// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include "ambient/models/mlp.hpp"
#include "ambient/numerics/kv_file.hpp"

namespace ambient {

struct Checkpoint {
  MlpParams params;
  KeyValues manifest;
};

/// Writes <stem>.w<l>.ambt / <stem>.b<l>.ambt per layer (f32 or f64) and the
/// manifest <stem>.kv holding widths, layout and the entries of `extra`
/// (seed, config hash, ...).
void save_checkpoint(const std::filesystem::path& stem, const MlpParams& params, const KeyValues& extra,
                     DType precision = DType::f64);
Checkpoint load_checkpoint(const std::filesystem::path& stem);

}  // namespace ambient
