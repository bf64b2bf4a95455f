// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "ambient/numerics/tensor.hpp"

namespace ambient {

/// Diagonal coil sensitivities S_i over an image grid, normalized so that
/// sum_i conj(S_i) S_i = 1 at every pixel.
struct CoilMaps {
  Shape shape;
  std::vector<CVec> maps;

  std::size_t count() const { return maps.size(); }
  /// Max over pixels of |sum_i |S_i|^2 - 1|.
  double normalization_residual() const;

  /// A single coil with S = I.
  static CoilMaps identity(const Shape& shape);

  /// Tensor of shape [count, ...shape].
  Tensor to_tensor() const;
  static CoilMaps from_tensor(const Tensor& t);
};

/// Smooth synthetic profiles: Gaussian-bump magnitudes centered around the
/// field of view (width `smoothness` in normalized [-1, 1) coordinates) with
/// random linear phase ramps, then renormalized pointwise.
CoilMaps make_coil_maps(const Shape& shape, std::size_t coils, double smoothness, std::uint64_t seed);

}  // namespace ambient
