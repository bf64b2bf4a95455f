// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "ambient/numerics/rng.hpp"
#include "ambient/numerics/tensor.hpp"

namespace ambient {

enum class MaskKind : std::uint8_t { pixel, kspace_line };

const char* to_string(MaskKind kind);

/// A realized 0/1 diagonal sampling operator together with the law it was drawn from.
///
/// Pixel masks erase each entry independently with probability `erasure`.
/// K-space masks keep or drop whole lines along the last axis (in 1-D every
/// entry is a line); `acs_lines` centered lines are always kept and the total
/// kept-line count is round(lines / acceleration). Line indices use the
/// centered frequency convention (zero frequency at lines / 2).
struct MaskSpec {
  MaskKind kind = MaskKind::pixel;
  Shape shape;
  double erasure = 0.0;
  double acceleration = 1.0;
  std::size_t acs_lines = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> keep;

  std::size_t entries() const { return keep.size(); }
  std::size_t line_count() const { return shape.back(); }
  std::size_t kept_entries() const;

  /// Per-line flags (a line is kept when every entry in it is kept).
  std::vector<std::uint8_t> line_flags() const;
  std::size_t kept_lines() const;
  bool is_acs(std::size_t line) const;

  Vec as_vec() const;
};

/// Number of kept lines at acceleration R: round(lines / R).
std::size_t line_budget(std::size_t lines, double acceleration);
/// The `acs` lines centered on lines / 2.
std::vector<std::size_t> acs_line_indices(std::size_t lines, std::size_t acs);

MaskSpec make_pixel_mask(const Shape& shape, double erasure, std::uint64_t seed);
MaskSpec make_kspace_mask(const Shape& shape, double acceleration, std::size_t acs_lines, std::uint64_t seed);
/// K-space mask with an explicit line pattern (ACS lines must be present).
MaskSpec kspace_mask_from_lines(const Shape& shape, const std::vector<std::uint8_t>& lines, double acceleration,
                                std::size_t acs_lines, std::uint64_t seed = 0);

/// Extra corruption applied on top of a realized mask. Pixel masks use `delta`
/// (per-kept-entry erasure probability); k-space masks move from R to
/// R + `acceleration_step` by removing non-ACS lines uniformly at random.
struct CorruptionPolicy {
  double delta = 0.0;
  double acceleration_step = 0.0;

  static CorruptionPolicy erase(double delta) { return {delta, 0.0}; }
  static CorruptionPolicy accelerate(double step = 1.0) { return {0.0, step}; }
};

MaskSpec further_corrupt(const MaskSpec& mask, const CorruptionPolicy& policy, Rng& rng);
MaskSpec further_corrupt(const MaskSpec& mask, const CorruptionPolicy& policy, std::uint64_t seed);

}  // namespace ambient
