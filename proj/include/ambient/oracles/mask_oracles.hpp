// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "ambient/operators/coils.hpp"
#include "ambient/operators/mask.hpp"
#include "ambient/oracles/report.hpp"

namespace ambient {

/// The law the acquisition mask P is drawn from.
struct MaskDistribution {
  MaskKind kind = MaskKind::kspace_line;
  Shape shape;
  double erasure = 0.0;       // pixel masks
  double acceleration = 1.0;  // k-space masks
  std::size_t acs_lines = 0;

  static MaskDistribution pixel(const Shape& shape, double erasure);
  static MaskDistribution kspace(const Shape& shape, double acceleration, std::size_t acs_lines);

  MaskSpec draw(Rng& rng) const;
};

/// Closed-form diagonal of E[P | P~] per entry.
///
/// K-space: P~ keeps k2 lines, P kept k1 = round(n / R) lines including the
/// ACS block, and given P~ every superset of k1 lines is equally likely, so
/// lines absent from P~ are present in P with probability (k1 - k2) / (n - k2).
/// Pixels: an entry erased in P~ was kept in P with probability
/// (1 - p) delta / (p + (1 - p) delta).
Vec exact_expected_mask(const MaskDistribution& dist, const CorruptionPolicy& policy, const MaskSpec& p_tilde);

/// Draws P from its conditional law given P~ (k-space masks only).
MaskSpec sample_mask_given(const MaskDistribution& dist, const MaskSpec& p_tilde, Rng& rng);

struct MaskSamples {
  /// One 0/1 row per accepted trial, entries in columns.
  std::vector<std::vector<std::uint8_t>> masks;
  std::size_t proposals = 0;

  Vec mean() const;
};

/// Monte-Carlo draws of P given P~: exact conditional sampling for k-space
/// masks, rejection (draw P, corrupt, accept if equal to P~) for pixel masks.
/// Throws std::runtime_error when no proposal is accepted.
MaskSamples sample_masks_given(const MaskDistribution& dist, const CorruptionPolicy& policy, const MaskSpec& p_tilde,
                               std::size_t trials, std::uint64_t seed);

/// Estimates E[P | P~] and reports its smallest diagonal entry; passes when it exceeds `tolerance`.
OracleReport expected_mask_fullrank(const MaskDistribution& dist, const CorruptionPolicy& policy,
                                    const MaskSpec& p_tilde, std::size_t trials, std::uint64_t seed,
                                    double tolerance = 0.01);

/// sum_i S_i^H F^-1 diag(p) F S_i as an explicit matrix.
CMat aggregate_matrix(const CoilMaps& coils, const Vec& mask_mean);
/// F^-1 diag(p) F.
CMat fourier_similar_matrix(const Shape& shape, const Vec& mask_mean);

inline constexpr std::size_t kMaxOracleEntries = 64;

/// Estimates E[A | P~] with A = sum_i S_i^H F^-1 P F S_i from Monte-Carlo
/// draws of P given P~ and reports its smallest singular value (standard
/// error from 64 batch means). `reference`
/// holds the value from exact_expected_mask. Passes when the estimate
/// exceeds `tolerance`.
OracleReport expected_operator_fullrank(const CoilMaps& coils, const MaskDistribution& dist,
                                        const CorruptionPolicy& policy, const MaskSpec& p_tilde, std::size_t trials,
                                        std::uint64_t seed, double tolerance = 0.01);

/// sigma_min of E[A | P~] from the closed-form conditional mask.
double exact_operator_sigma_min(const CoilMaps& coils, const MaskDistribution& dist, const CorruptionPolicy& policy,
                                const MaskSpec& p_tilde);

}  // namespace ambient
