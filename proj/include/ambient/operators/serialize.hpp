// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "ambient/operators/linear_op.hpp"

namespace ambient {

// Masks and operators persist as `<stem>.ambt` tensors plus a `<stem>.kv`
// sidecar carrying kind, p/R, acs_lines and seed.

void save_mask(const std::filesystem::path& stem, const MaskSpec& mask);
MaskSpec load_mask(const std::filesystem::path& stem);

void save_coils(const std::filesystem::path& path, const CoilMaps& coils);
CoilMaps load_coils(const std::filesystem::path& path);

/// Supports identity, inpaint, gaussian_cs, downsample and both MRI kinds.
void save_operator(const std::filesystem::path& stem, const LinearOp& op);
LinearOpPtr load_operator(const std::filesystem::path& stem);

}  // namespace ambient
