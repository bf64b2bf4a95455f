// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "ambient/oracles/report.hpp"

namespace ambient {

/// adjoint_check on every operator family (inpainting, Gaussian CS,
/// downsampling, MRI aggregate and forward, a composite). One report per operator.
std::vector<OracleReport> verify_adjoints(std::size_t pairs, std::uint64_t seed, double tolerance = 1e-10);

/// Reverse-mode gradients of a random MLP (parameters, packed input, and
/// denoiser VJP) against central differences at `points` random points.
OracleReport verify_gradients(std::size_t points, std::uint64_t seed, double tolerance = 1e-4);

struct FullRankOptions {
  std::size_t n = 16;
  std::vector<std::size_t> coils{1, 2, 4};
  /// Pairs (R, R + 1).
  std::vector<double> accelerations{2.0, 4.0};
  std::size_t acs_lines = 2;
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  double coil_smoothness = 0.5;
};

/// expected_operator_fullrank over the coil and acceleration grid, each with
/// a P~ drawn from the training law.
std::vector<OracleReport> verify_full_rank(const FullRankOptions& options);

/// Monte-Carlo sigma_min against the closed form on a small problem; passes
/// within 3 standard errors.
OracleReport full_rank_exact_agreement(std::size_t n, std::size_t coils, double acceleration, std::size_t acs_lines,
                                      std::size_t trials, std::uint64_t seed);

struct MinimizerCheckOptions {
  std::size_t atoms = 4;
  std::size_t n = 8;
  double erasure = 0.2;
  double delta = 0.1;
  std::vector<double> sigmas{0.2, 0.35, 0.5};
  std::vector<std::size_t> hidden{64, 64};
  std::size_t iterations = 40000;
  std::size_t batch = 64;
  double learning_rate = 0.3;
  double final_lr_fraction = 0.01;
  std::size_t grid_per_sigma = 200;
  std::uint64_t seed = 0;
};

struct MinimizerCheckResult {
  OracleReport trained;
  OracleReport untrained;
};

/// Trains an ambient inpainting MLP on a random discrete prior and compares
/// it with the enumeration oracle on a held-out grid; the untrained network
/// is the negative control.
MinimizerCheckResult verify_ambient_minimizer(const MinimizerCheckOptions& options);

}  // namespace ambient
