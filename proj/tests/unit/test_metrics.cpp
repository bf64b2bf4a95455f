// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ambient/metrics/metrics.hpp"
#include "ambient/numerics/rng.hpp"

namespace ambient {
namespace {

Vec uniform_vec(Rng& rng, std::size_t n) {
  Vec v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = rng.uniform();
  return v;
}

// Straightforward SSIM: two-pass window statistics, uniform 7x7 valid windows.
double reference_ssim(const Vec& a, const Vec& b, std::size_t rows, std::size_t cols, double range) {
  const double c1 = std::pow(0.01 * range, 2), c2 = std::pow(0.03 * range, 2);
  const std::size_t w = 7;
  double total = 0.0;
  int count = 0;
  for (std::size_t r0 = 0; r0 + w <= rows; ++r0) {
    for (std::size_t c0 = 0; c0 + w <= cols; ++c0) {
      std::vector<double> xs, ys;
      for (std::size_t r = r0; r < r0 + w; ++r)
        for (std::size_t c = c0; c < c0 + w; ++c) {
          xs.push_back(a[static_cast<Eigen::Index>(r * cols + c)]);
          ys.push_back(b[static_cast<Eigen::Index>(r * cols + c)]);
        }
      double mx = 0, my = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
      }
      mx /= xs.size();
      my /= ys.size();
      double vx = 0, vy = 0, cxy = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        vx += (xs[i] - mx) * (xs[i] - mx);
        vy += (ys[i] - my) * (ys[i] - my);
        cxy += (xs[i] - mx) * (ys[i] - my);
      }
      const double k = static_cast<double>(xs.size() - 1);
      vx /= k;
      vy /= k;
      cxy /= k;
      total += (2 * mx * my + c1) * (2 * cxy + c2) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  }
  return total / count;
}

TEST(Metrics, IdenticalImages) {
  Rng rng(1);
  const CVec x = rng.complex_normal_vec(100);
  const MetricValues v = compute_metrics(x, x, {10, 10}, 4.0);
  EXPECT_EQ(v.mse, 0.0);
  EXPECT_EQ(v.nrmse, 0.0);
  EXPECT_EQ(v.psnr, kPsnrCap);
  EXPECT_DOUBLE_EQ(v.ssim, 1.0);
}

TEST(Metrics, HandComputedNrmse) {
  const CVec x = (CVec(2) << 3.0, 4.0).finished();
  EXPECT_DOUBLE_EQ(nrmse(x, CVec::Zero(2)), 1.0);
  EXPECT_DOUBLE_EQ(mse(x, CVec::Zero(2)), 12.5);
  EXPECT_THROW(nrmse(CVec::Zero(2), x), std::domain_error);
}

TEST(Metrics, ShapeMismatchIsAnError) {
  EXPECT_THROW(mse(CVec::Zero(3), CVec::Zero(4)), std::invalid_argument);
  EXPECT_THROW(compute_metrics(Tensor::from({4, 4}, Vec(Vec::Zero(16))), Tensor::from({2, 8}, Vec(Vec::Zero(16))), 1.0),
               std::invalid_argument);
}

TEST(Metrics, MatchesSecondImplementation) {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t rows = 9 + trial, cols = 12;
    const Vec a = uniform_vec(rng, rows * cols);
    const Vec b = a + 0.1 * rng.normal_vec(rows * cols);
    const CVec ca = a.cast<cplx>(), cb = b.cast<cplx>();
    const MetricValues v = compute_metrics(ca, cb, {rows, cols}, 1.0);
    double se = 0, ref = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      se += (a[i] - b[i]) * (a[i] - b[i]);
      ref += a[i] * a[i];
    }
    const double m = se / a.size();
    EXPECT_NEAR(v.mse, m, 1e-12);
    EXPECT_NEAR(v.nrmse, std::sqrt(se / ref), 1e-12);
    EXPECT_NEAR(v.psnr, 10.0 * std::log10(1.0 / m), 1e-10);
    EXPECT_NEAR(v.ssim, reference_ssim(a, b.cwiseAbs(), rows, cols, 1.0), 1e-10);
  }
}

TEST(Metrics, SsimUsesMagnitudeOfComplexInputs) {
  Rng rng(3);
  const CVec x = rng.complex_normal_vec(64);
  const CVec rotated = x * std::polar(1.0, 0.7);
  EXPECT_DOUBLE_EQ(compute_metrics(x, rotated, {8, 8}, 3.0).ssim, 1.0);
}

TEST(Metrics, SsimSymmetricAndBounded) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec a = uniform_vec(rng, 144), b = uniform_vec(rng, 144);
    const double ab = ssim(a, b, {12, 12}, 1.0), ba = ssim(b, a, {12, 12}, 1.0);
    EXPECT_NEAR(ab, ba, 1e-14);
    EXPECT_GE(ab, -1.0);
    EXPECT_LT(ab, 1.0);
    EXPECT_DOUBLE_EQ(ssim(a, a, {12, 12}, 1.0), 1.0);
  }
}

TEST(Metrics, PsnrStrictlyDecreasingInMse) {
  double prev = psnr(1e-8, 1.0);
  for (double m = 1e-7; m < 10.0; m *= 3.0) {
    const double p = psnr(m, 1.0);
    EXPECT_LT(p, prev);
    prev = p;
  }
  EXPECT_THROW(psnr(1.0, 0.0), std::invalid_argument);
}

TEST(MetricReport, MeanStdAndCsv) {
  MetricReport r;
  r.add("a", {1.0, 0.1, 30.0, 0.9});
  r.add("b", {3.0, 0.3, 20.0, 0.7});
  r.add_failure("c");
  EXPECT_EQ(r.size(), 3u);
  EXPECT_EQ(r.failures(), 1u);
  EXPECT_DOUBLE_EQ(r.mean().mse, 2.0);
  EXPECT_DOUBLE_EQ(r.stddev().mse, std::sqrt(2.0));
  std::ostringstream out;
  r.write_csv(out);
  std::istringstream in(out.str());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0], "id,mse,nrmse,psnr,ssim");
  EXPECT_EQ(lines[1].substr(0, 2), "a,");
  EXPECT_EQ(lines[3].substr(0, 2), "c,");
  EXPECT_NE(lines[3].find("nan"), std::string::npos);
  EXPECT_EQ(lines[4].substr(0, 5), "mean,");
  EXPECT_EQ(lines[5].substr(0, 4), "std,");
}

}  // namespace
}  // namespace ambient
