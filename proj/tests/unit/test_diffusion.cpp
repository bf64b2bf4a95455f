// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "ambient/diffusion/schedule.hpp"

namespace ambient {
namespace {

TEST(Schedule, GridEndpointsAndOrder) {
  const NoiseSchedule s;
  for (std::size_t n : {2u, 3u, 50u, 500u}) {
    const auto grid = s.time_grid(n);
    ASSERT_EQ(grid.size(), n);
    EXPECT_EQ(grid.front(), s.t_max());
    EXPECT_EQ(grid.back(), s.t_min());
    for (std::size_t i = 1; i < n; ++i) EXPECT_LT(grid[i], grid[i - 1]);
  }
  EXPECT_THROW(s.time_grid(1), std::invalid_argument);
}

TEST(Schedule, EdmSpacingFormula) {
  const NoiseSchedule s;
  const auto grid = s.time_grid(18);
  const double a = std::pow(s.sigma_max, 1.0 / s.rho);
  const double b = std::pow(s.sigma_min, 1.0 / s.rho);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i)
    EXPECT_NEAR(grid[i], std::pow(a + i / 17.0 * (b - a), s.rho), 1e-12 * grid[i]);
}

TEST(Schedule, LinearSpacing) {
  NoiseSchedule s;
  s.spacing = GridSpacing::linear;
  s.sigma_min = 1.0;
  s.sigma_max = 3.0;
  EXPECT_EQ(s.time_grid(3), (std::vector<double>{3.0, 2.0, 1.0}));
}

TEST(Schedule, DiffusionCoefficient) {
  const NoiseSchedule s;
  EXPECT_NEAR(s.g(2.0), 2.0, 1e-15);  // sqrt(2 * 1 * 2)
  EXPECT_DOUBLE_EQ(s.sigma(0.5), 0.5);
}

TEST(Schedule, ValidationAndConfigRoundTrip) {
  NoiseSchedule bad;
  bad.sigma_min = 5.0;
  bad.sigma_max = 1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  NoiseSchedule s;
  s.sigma_min = 0.01;
  s.rho = 5.0;
  KeyValues kv;
  s.write_config(kv);
  const NoiseSchedule back = NoiseSchedule::from_config(kv);
  EXPECT_EQ(back.sigma_min, 0.01);
  EXPECT_EQ(back.rho, 5.0);
}

TEST(AddNoise, ZeroSigmaIsExact) {
  NoiseSchedule s;
  s.sigma_min = 0.0;
  Rng rng(1);
  const Vec x = Vec::LinSpaced(8, -1.0, 1.0);
  EXPECT_EQ(add_noise(x, 0.0, rng, s), x);
}

TEST(AddNoise, VarianceMatchesSigma) {
  Rng rng(2);
  const Vec x = Vec::Zero(100000);
  const Vec y = add_noise(x, 3.0, rng);
  EXPECT_NEAR(y.squaredNorm() / y.size(), 9.0, 0.15);
}

TEST(AddNoise, ComplexPartsHaveUnitVariance) {
  Rng rng(3);
  const Tensor x(DType::c128, {50000});
  const CVec y = add_noise(x, 2.0, rng).to_cvec();
  EXPECT_NEAR(y.real().squaredNorm() / y.size(), 4.0, 0.1);
  EXPECT_NEAR(y.imag().squaredNorm() / y.size(), 4.0, 0.1);
}

TEST(AddNoise, RejectsTimesOutsideTheSchedule) {
  Rng rng(4);
  EXPECT_THROW(add_noise(Vec::Zero(2), 100.0, rng), std::invalid_argument);
  EXPECT_THROW(add_noise(Vec::Zero(2), 0.001, rng), std::invalid_argument);
}

}  // namespace
}  // namespace ambient
