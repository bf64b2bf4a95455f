// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <span>

#include "ambient/baselines/fista.hpp"
#include "ambient/baselines/ssdu.hpp"
#include "ambient/numerics/haar.hpp"
#include "ambient/operators/linear_op.hpp"

namespace ambient {
namespace {

// Real signal with `k` nonzero Haar coefficients of magnitude 1..3.
CVec sparse_haar_signal(std::size_t n, std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  CVec w = CVec::Zero(static_cast<Eigen::Index>(n));
  std::size_t placed = 0;
  while (placed < k) {
    const auto i = static_cast<Eigen::Index>(rng.below(n));
    if (w[i] != 0.0) continue;
    w[i] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (1.0 + 2.0 * rng.uniform());
    ++placed;
  }
  haar_inv_inplace(std::span<cplx>(w.data(), n), {n}, max_haar_levels({n}));
  return w;
}

TEST(FistaConfig, DefaultsAndValidation) {
  const FistaConfig c;
  EXPECT_DOUBLE_EQ(c.lambda, 0.001);
  EXPECT_EQ(c.iterations, 100u);
  FistaConfig bad;
  bad.lambda = -1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = FistaConfig{};
  bad.iterations = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  KeyValues kv;
  c.write_config(kv);
  EXPECT_DOUBLE_EQ(FistaConfig::from_config(kv).lambda, 0.001);
}

TEST(Fista, IdentityWithoutRegularizationReturnsMeasurement) {
  Rng rng(1);
  const CVec y = rng.complex_normal_vec(16);
  FistaConfig c;
  c.lambda = 0.0;
  c.iterations = 1;
  const FistaResult r = fista_l1wavelet(y, *identity_operator({16}), c);
  EXPECT_EQ(r.x, y);
}

TEST(Fista, ZeroOperatorIsAnError) {
  MaskSpec m = make_pixel_mask({8}, 0.0, 0);
  std::fill(m.keep.begin(), m.keep.end(), 0);
  EXPECT_THROW(fista_l1wavelet(CVec::Zero(8), *inpaint_operator(m), FistaConfig{}), std::domain_error);
}

TEST(Fista, PowerIterationFindsOperatorNorm) {
  const auto op = gaussian_cs_operator(32, 12, 4);
  const CMat a = dense_matrix(*op);
  const double exact = Eigen::JacobiSVD<CMat>(a).singularValues()[0];
  EXPECT_NEAR(operator_norm_squared(*op, 200, 1), exact * exact, 1e-6 * exact * exact);
}

TEST(Fista, SoftThresholdShrinksCoefficientMagnitudes) {
  const CVec x = (CVec(2) << cplx(3.0, 4.0), cplx(0.1, 0.0)).finished();
  const CVec out = haar_soft_threshold(x, {2}, 1.0, 0);
  EXPECT_NEAR(std::abs(out[0]), 4.0, 1e-12);
  EXPECT_NEAR(std::arg(out[0]), std::arg(x[0]), 1e-12);
  EXPECT_EQ(out[1], cplx(0.0, 0.0));
}

TEST(Fista, SparseRecoveryFromGaussianMeasurements) {
  const std::size_t n = 256, m = 100;
  const CVec x = sparse_haar_signal(n, 5, 3);
  const auto op = gaussian_cs_operator(n, m, 9);
  const CVec y = op->apply(x);
  FistaConfig c;
  c.lambda = 1e-5;
  c.iterations = 3000;
  const FistaResult r = fista_l1wavelet(y, *op, c);
  EXPECT_LT((r.x - x).norm() / x.norm(), 1e-3);

  // Support of the recovered Haar coefficients matches the construction.
  CVec wx = x, wr = r.x;
  haar_fwd_inplace(std::span<cplx>(wx.data(), n), {n}, max_haar_levels({n}));
  haar_fwd_inplace(std::span<cplx>(wr.data(), n), {n}, max_haar_levels({n}));
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(std::abs(wx[i]) > 0.5, std::abs(wr[i]) > 0.5) << i;
}

TEST(Fista, ObjectiveNonIncreasingAfterWarmup) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto op = gaussian_cs_operator(64, 24, seed);
    Rng rng(seed);
    const CVec y = rng.complex_normal_vec(24);
    FistaConfig c;
    c.lambda = 0.05;
    const FistaResult r = fista_l1wavelet(y, *op, c);
    ASSERT_EQ(r.objective.size(), c.iterations);
    for (std::size_t k = 6; k < r.objective.size(); ++k) EXPECT_LE(r.objective[k], r.objective[k - 1]) << k;
  }
}

TEST(Fista, FixedPointSatisfiesProximalStationarity) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto op = gaussian_cs_operator(16, 10, 20 + seed);
    Rng rng(seed);
    const CVec y = rng.complex_normal_vec(10);
    FistaConfig c;
    c.lambda = 0.01;
    c.iterations = 10 * FistaConfig{}.iterations;
    const FistaResult r = fista_l1wavelet(y, *op, c);
    EXPECT_LT(fista_stationarity(r.x, y, *op, c.lambda, r.lipschitz, 0), 1e-6) << seed;
  }
}

// ---- SSDU -----------------------------------------------------------------

TEST(Ssdu, SplitCountsAndSetIdentity) {
  const MaskSpec omega = make_kspace_mask({256}, 4.0, 8, 2);
  ASSERT_EQ(omega.kept_lines(), 64u);
  const SsduSplit s = ssdu_split(omega, 0.2, 5);
  EXPECT_EQ(s.lambda.kept_lines(), 13u);
  EXPECT_EQ(s.theta.kept_lines(), 51u);
  for (std::size_t i = 0; i < omega.entries(); ++i) {
    EXPECT_EQ(omega.keep[i], s.theta.keep[i] | s.lambda.keep[i]) << i;
    EXPECT_FALSE(s.theta.keep[i] && s.lambda.keep[i]) << i;
  }
  for (std::size_t line : acs_line_indices(256, 8)) EXPECT_TRUE(s.theta.keep[line]);
  EXPECT_NEAR(s.realized_rho(), 0.2, 1.0 / 64.0);
}

TEST(Ssdu, RejectsDegenerateRatios) {
  const MaskSpec omega = make_kspace_mask({16}, 2.0, 2, 1);
  EXPECT_THROW(ssdu_split(omega, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(ssdu_split(omega, 1.0, 1), std::invalid_argument);
  EXPECT_THROW(ssdu_split(omega, 0.999, 1), std::invalid_argument);
}

// Without ACS lines every kept line is eligible, so each lands in Lambda with
// probability round(rho |Omega|) / |Omega|.
TEST(Ssdu, LineFrequencyMatchesRho) {
  const MaskSpec omega = make_kspace_mask({128}, 2.0, 0, 3);
  const std::size_t seeds = 100000;
  std::vector<std::size_t> hits(128, 0);
  for (std::size_t s = 0; s < seeds; ++s) {
    const SsduSplit split = ssdu_split(omega, 0.2, s);
    for (std::size_t i = 0; i < 128; ++i) hits[i] += split.lambda.keep[i];
  }
  for (std::size_t i = 0; i < 128; ++i) {
    if (!omega.keep[i]) {
      EXPECT_EQ(hits[i], 0u);
      continue;
    }
    EXPECT_NEAR(static_cast<double>(hits[i]) / seeds, 0.2, 0.01) << i;
  }
}

TEST(SsduLoss, HandComputedValues) {
  const auto eye = identity_operator({2});
  const CVec y = (CVec(2) << 1.0, 0.0).finished();
  EXPECT_DOUBLE_EQ(ssdu_loss(y, CVec::Zero(2), *eye), 2.0);
  EXPECT_DOUBLE_EQ(ssdu_loss(y, y, *eye), 0.0);
  EXPECT_THROW(ssdu_loss(CVec::Zero(2), y, *eye), std::domain_error);
}

TEST(SsduLoss, MatchesDirectRecomputation) {
  Rng rng(4);
  const auto op = gaussian_cs_operator(12, 7, 2);
  const CVec x_hat = rng.complex_normal_vec(12);
  const CVec y = rng.complex_normal_vec(7);
  const CMat a = dense_matrix(*op);
  double l1 = 0, l1y = 0, l2 = 0, l2y = 0;
  for (Eigen::Index i = 0; i < 7; ++i) {
    cplx ax = 0.0;
    for (Eigen::Index j = 0; j < 12; ++j) ax += a(i, j) * x_hat[j];
    const cplx r = y[i] - ax;
    l1 += std::abs(r);
    l1y += std::abs(y[i]);
    l2 += std::norm(r);
    l2y += std::norm(y[i]);
  }
  EXPECT_NEAR(ssdu_loss(y, x_hat, *op), l1 / l1y + std::sqrt(l2 / l2y), 1e-12);
}

TEST(NrmseLoss, HandComputedValues) {
  const CVec x = (CVec(2) << 3.0, 4.0).finished();
  EXPECT_DOUBLE_EQ(nrmse_loss(x, x), 0.0);
  EXPECT_DOUBLE_EQ(nrmse_loss(x, CVec::Zero(2)), 1.0);
  EXPECT_THROW(nrmse_loss(CVec::Zero(2), x), std::domain_error);
}

}  // namespace
}  // namespace ambient
