// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ambient/numerics/kv_file.hpp"
#include "ambient/operators/linear_op.hpp"

namespace ambient {

struct FistaConfig {
  double lambda = 1e-3;
  std::size_t iterations = 100;
  /// Haar levels; 0 uses the maximum the shape allows.
  int levels = 0;
  std::size_t power_iterations = 100;
  std::uint64_t seed = 0;

  void validate() const;
  void write_config(KeyValues& kv) const;
  static FistaConfig from_config(const KeyValues& kv);
};

struct FistaResult {
  CVec x;
  /// Objective of the accepted iterate after each iteration.
  std::vector<double> objective;
  double lipschitz = 0.0;
};

/// Largest eigenvalue of A^H A by power iteration (Rayleigh quotient).
double operator_norm_squared(const LinearOp& op, std::size_t iterations, std::uint64_t seed);

/// 1/2 ||A x - y||^2 + lambda ||W x||_1 with W the orthonormal Haar transform.
double l1wavelet_objective(const CVec& x, const CVec& y, const LinearOp& op, double lambda, int levels);

/// Proximal map of tau ||W x||_1: W^T soft(W x, tau).
CVec haar_soft_threshold(const CVec& x, const Shape& shape, double tau, int levels);

/// Monotone FISTA from x = 0 with step 1/L; momentum restarts when a step would raise the objective.
FistaResult fista_l1wavelet(const CVec& y, const LinearOp& op, const FistaConfig& config);

/// ||x - prox(x - grad f(x) / L)||, zero exactly at minimizers.
double fista_stationarity(const CVec& x, const CVec& y, const LinearOp& op, double lambda, double lipschitz,
                          int levels);

}  // namespace ambient
