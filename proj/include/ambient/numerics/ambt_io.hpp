// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "ambient/numerics/tensor.hpp"

namespace ambient {

// AMBT v1 layout (little-endian throughout):
//   "AMBT" | u8 version=1 | u8 dtype (0=f32 1=f64 2=c64 3=c128) | u8 ndim | u8 pad
//   | ndim x u32 dims | row-major payload

inline constexpr std::uint8_t kAmbtVersion = 1;

std::string encode_ambt(const Tensor& tensor);
/// Throws std::runtime_error on bad magic, unknown version/dtype, truncation or trailing bytes.
Tensor decode_ambt(std::string_view bytes);

void save_tensor(const std::filesystem::path& path, const Tensor& tensor);
/// When `expected` is set, a file with another dtype is rejected.
Tensor load_tensor(const std::filesystem::path& path, std::optional<DType> expected = std::nullopt);

}  // namespace ambient
