// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/baselines/ssdu.hpp"

#include <cmath>
#include <stdexcept>

#include "ambient/metrics/metrics.hpp"
#include "ambient/numerics/rng.hpp"

namespace ambient {

namespace {

std::size_t units(const MaskSpec& m) { return m.kind == MaskKind::kspace_line ? m.kept_lines() : m.kept_entries(); }

}  // namespace

double SsduSplit::realized_rho() const {
  return static_cast<double>(units(lambda)) / static_cast<double>(units(omega));
}

SsduSplit ssdu_split(const MaskSpec& omega, double rho, std::uint64_t seed) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0, 1)");
  const bool lines = omega.kind == MaskKind::kspace_line;
  std::vector<std::size_t> pool;
  std::size_t acquired = 0;
  if (lines) {
    const auto flags = omega.line_flags();
    for (std::size_t l = 0; l < flags.size(); ++l) {
      if (!flags[l]) continue;
      ++acquired;
      if (!omega.is_acs(l)) pool.push_back(l);
    }
  } else {
    for (std::size_t i = 0; i < omega.entries(); ++i)
      if (omega.keep[i]) {
        ++acquired;
        pool.push_back(i);
      }
  }
  const auto loss_count = static_cast<std::size_t>(std::lround(rho * static_cast<double>(acquired)));
  if (loss_count == 0) throw std::invalid_argument("rho leaves the loss set empty");
  if (loss_count >= acquired) throw std::invalid_argument("rho leaves the reconstruction set empty");
  if (loss_count > pool.size())
    throw std::invalid_argument("only " + std::to_string(pool.size()) + " non-ACS lines available for a loss set of " +
                                std::to_string(loss_count));

  Rng rng(seed);
  const auto picks = rng.sample_without_replacement(pool.size(), loss_count);
  SsduSplit s;
  s.omega = omega;
  s.rho = rho;
  s.theta = omega;
  s.lambda = omega;
  std::fill(s.lambda.keep.begin(), s.lambda.keep.end(), 0);
  const std::size_t line_len = lines ? omega.line_count() : 1;
  for (auto p : picks) {
    const std::size_t unit = pool[p];
    if (lines) {
      for (std::size_t i = unit; i < omega.entries(); i += line_len) {
        s.lambda.keep[i] = 1;
        s.theta.keep[i] = 0;
      }
    } else {
      s.lambda.keep[unit] = 1;
      s.theta.keep[unit] = 0;
    }
  }
  s.lambda.acs_lines = 0;
  s.lambda.seed = s.theta.seed = seed;
  return s;
}

double ssdu_loss(const CVec& y_lambda, const CVec& x_hat, const LinearOp& a_lambda) {
  const double l1 = y_lambda.cwiseAbs().sum();
  const double l2 = y_lambda.norm();
  if (!(l1 > 0.0)) throw std::domain_error("ssdu_loss: loss measurements are zero");
  const CVec r = y_lambda - a_lambda.apply(x_hat);
  return r.cwiseAbs().sum() / l1 + r.norm() / l2;
}

double nrmse_loss(const CVec& x, const CVec& x_hat) { return nrmse(x, x_hat); }

}  // namespace ambient
