// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "ambient/operators/linear_op.hpp"

namespace ambient {

/// Disjoint partition of the acquired mask Omega into a reconstruction part
/// Theta and a loss part Lambda. ACS lines always go to Theta.
struct SsduSplit {
  MaskSpec omega;
  MaskSpec theta;
  MaskSpec lambda;
  double rho = 0.0;  // requested |Lambda| / |Omega|

  /// Realized |Lambda| / |Omega| in lines (entries for pixel masks).
  double realized_rho() const;
};

/// |Lambda| = round(rho |Omega|), drawn uniformly without replacement from
/// the non-ACS kept lines (kept entries for pixel masks).
SsduSplit ssdu_split(const MaskSpec& omega, double rho, std::uint64_t seed);

/// ||y - A x||_1 / ||y||_1 + ||y - A x||_2 / ||y||_2.
double ssdu_loss(const CVec& y_lambda, const CVec& x_hat, const LinearOp& a_lambda);

/// ||x - x_hat||_2 / ||x||_2.
double nrmse_loss(const CVec& x, const CVec& x_hat);

}  // namespace ambient
