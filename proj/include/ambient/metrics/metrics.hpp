// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ambient/numerics/tensor.hpp"

namespace ambient {

/// Reported PSNR when the estimate is exact.
inline constexpr double kPsnrCap = 999.0;
inline constexpr std::size_t kSsimWindow = 7;

double mse(const CVec& reference, const CVec& estimate);
/// ||x - x_hat|| / ||x||. Throws std::domain_error for a zero reference.
double nrmse(const CVec& reference, const CVec& estimate);
/// 10 log10(range^2 / mse), kPsnrCap when mse = 0.
double psnr(double mse, double data_range);
/// Mean SSIM over all valid uniform windows (7 per axis, clipped to the
/// image), sample (co)variances, C1 = (0.01 R)^2, C2 = (0.03 R)^2.
double ssim(const Vec& a, const Vec& b, const Shape& shape, double data_range);

struct MetricValues {
  double mse = 0.0;
  double nrmse = 0.0;
  double psnr = 0.0;
  double ssim = 0.0;
};

/// SSIM is computed on magnitudes.
MetricValues compute_metrics(const CVec& reference, const CVec& estimate, const Shape& shape, double data_range);
MetricValues compute_metrics(const Tensor& reference, const Tensor& estimate, double data_range);

/// Per-sample metrics with mean and sample standard deviation over the
/// finite rows. Failed samples are stored as NaN rows.
class MetricReport {
 public:
  void add(std::string id, const MetricValues& values);
  void add_failure(std::string id);

  std::size_t size() const { return rows_.size(); }
  std::size_t failures() const;
  const std::vector<std::pair<std::string, MetricValues>>& rows() const { return rows_; }
  MetricValues mean() const;
  MetricValues stddev() const;

  /// "id,mse,nrmse,psnr,ssim" rows followed by "mean" and "std" rows.
  void write_csv(std::ostream& out) const;

 private:
  std::vector<std::pair<std::string, MetricValues>> rows_;
};

}  // namespace ambient
