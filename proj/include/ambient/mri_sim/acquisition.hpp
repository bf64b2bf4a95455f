// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ambient/mri_sim/phantom.hpp"
#include "ambient/operators/coils.hpp"
#include "ambient/operators/mask.hpp"

namespace ambient {

/// Noiseless multi-coil k-space z_i = P F S_i x (centered unitary FFT).
struct KspaceData {
  std::vector<CVec> kspace;
  MaskSpec mask;
  CoilMaps coils;

  const Shape& shape() const { return mask.shape; }
  std::size_t coil_count() const { return kspace.size(); }
};

KspaceData acquire(const CVec& image, const CoilMaps& coils, const MaskSpec& mask);
KspaceData acquire(const Phantom& phantom, const CoilMaps& coils, const MaskSpec& mask);

/// Per-coil F^-1 z_i.
std::vector<CVec> coil_images(const KspaceData& data);
/// sum_i S_i^H F^-1 z_i.
CVec adjoint_combine(const KspaceData& data);
CVec adjoint_combine(const std::vector<CVec>& kspace, const CoilMaps& coils);
/// sqrt(sum_i |v_i|^2) per pixel.
Vec root_sum_of_squares(const std::vector<CVec>& images);

/// Noise prewhitening. The synthetic data are noiseless, so the whitening
/// transform is the identity.
KspaceData prewhiten(KspaceData data);

inline constexpr std::size_t kNormalizationBlock = 24;

struct NormalizedKspace {
  KspaceData data;
  double scale = 1.0;
};

/// 99th percentile (linear interpolation between order statistics) of the
/// RSS image reconstructed from the central kNormalizationBlock^d k-space
/// block (clamped to the grid). Throws std::domain_error when it is zero.
double normalization_scale(const KspaceData& data);
/// Divides every z_i by normalization_scale().
NormalizedKspace normalize(const KspaceData& data);

double percentile(std::vector<double> values, double q);

}  // namespace ambient
