// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ambient/numerics/tensor.hpp"

namespace ambient {

enum class Field { real, complex };

/// Layout of a signal as a flat real vector ("channels"): real signals map
/// entry-for-entry, complex signals interleave (re, im) per entry.
struct SignalSpace {
  Shape shape;
  Field field = Field::real;

  std::size_t entries() const { return shape_size(shape); }
  std::size_t channels() const { return field == Field::complex ? 2 * entries() : entries(); }
};

Vec to_channels(const CVec& x, Field field);
CVec from_channels(const Vec& channels, Field field);

}  // namespace ambient
