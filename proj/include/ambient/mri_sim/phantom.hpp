// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "ambient/numerics/tensor.hpp"

namespace ambient {

struct PhantomParams {
  std::size_t min_ellipses = 3;
  std::size_t max_ellipses = 8;
  double min_intensity = 0.1;
  double max_intensity = 0.6;
  double max_phase_slope = 0.8;  // radians across half the field of view
};

/// Random-ellipse complex image: summed ellipse intensities (clamped to 1.5)
/// times a smooth phase exp(i (phi0 + linear ramp)). 1-D shapes use intervals.
struct Phantom {
  Shape shape;
  CVec image;
  std::size_t ellipses = 0;
  std::uint64_t seed = 0;

  Tensor to_tensor() const { return Tensor::from(shape, image); }
};

inline constexpr double kPhantomMaxMagnitude = 1.5;

Phantom make_phantom(const Shape& shape, std::uint64_t seed, const PhantomParams& params = {});

}  // namespace ambient
