// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ambient/numerics/kv_file.hpp"

namespace ambient {

namespace {

void check_sizes(const CVec& a, const CVec& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("metric inputs differ in size: " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
}

}  // namespace

double mse(const CVec& reference, const CVec& estimate) {
  check_sizes(reference, estimate);
  if (reference.size() == 0) throw std::invalid_argument("metrics of empty images");
  return (reference - estimate).squaredNorm() / static_cast<double>(reference.size());
}

double nrmse(const CVec& reference, const CVec& estimate) {
  check_sizes(reference, estimate);
  const double n = reference.norm();
  if (!(n > 0.0)) throw std::domain_error("nrmse: zero reference");
  return (reference - estimate).norm() / n;
}

double psnr(double mse_value, double data_range) {
  if (!(data_range > 0.0)) throw std::invalid_argument("data range must be positive");
  if (mse_value == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(data_range * data_range / mse_value));
}

double ssim(const Vec& a, const Vec& b, const Shape& shape, double data_range) {
  if (a.size() != b.size() || static_cast<std::size_t>(a.size()) != shape_size(shape))
    throw std::invalid_argument("ssim: shape mismatch");
  if (shape.size() > 2) throw std::invalid_argument("ssim supports 1-D and 2-D images");
  if (!(data_range > 0.0)) throw std::invalid_argument("data range must be positive");
  const std::size_t rows = shape.size() == 2 ? shape[0] : 1;
  const std::size_t cols = shape.back();
  const std::size_t wr = shape.size() == 2 ? std::min(kSsimWindow, rows) : 1;
  const std::size_t wc = std::min(kSsimWindow, cols);
  const double n = static_cast<double>(wr * wc);
  if (n < 2) throw std::invalid_argument("ssim window needs at least two pixels");
  const double c1 = (0.01 * data_range) * (0.01 * data_range);
  const double c2 = (0.03 * data_range) * (0.03 * data_range);
  double total = 0.0;
  std::size_t windows = 0;
  for (std::size_t r0 = 0; r0 + wr <= rows; ++r0) {
    for (std::size_t c0 = 0; c0 + wc <= cols; ++c0) {
      double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
      for (std::size_t r = r0; r < r0 + wr; ++r) {
        for (std::size_t c = c0; c < c0 + wc; ++c) {
          const double x = a[static_cast<Eigen::Index>(r * cols + c)];
          const double y = b[static_cast<Eigen::Index>(r * cols + c)];
          sa += x;
          sb += y;
          saa += x * x;
          sbb += y * y;
          sab += x * y;
        }
      }
      const double ma = sa / n, mb = sb / n;
      const double va = (saa - n * ma * ma) / (n - 1);
      const double vb = (sbb - n * mb * mb) / (n - 1);
      const double cov = (sab - n * ma * mb) / (n - 1);
      total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++windows;
    }
  }
  return total / static_cast<double>(windows);
}

MetricValues compute_metrics(const CVec& reference, const CVec& estimate, const Shape& shape, double data_range) {
  MetricValues v;
  v.mse = mse(reference, estimate);
  v.nrmse = nrmse(reference, estimate);
  v.psnr = psnr(v.mse, data_range);
  v.ssim = ssim(reference.cwiseAbs(), estimate.cwiseAbs(), shape, data_range);
  return v;
}

MetricValues compute_metrics(const Tensor& reference, const Tensor& estimate, double data_range) {
  if (reference.shape() != estimate.shape())
    throw std::invalid_argument("metric inputs differ in shape: " + shape_string(reference.shape()) + " vs " +
                                shape_string(estimate.shape()));
  return compute_metrics(reference.to_cvec(), estimate.to_cvec(), reference.shape(), data_range);
}

void MetricReport::add(std::string id, const MetricValues& values) { rows_.emplace_back(std::move(id), values); }

void MetricReport::add_failure(std::string id) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  rows_.emplace_back(std::move(id), MetricValues{nan, nan, nan, nan});
}

std::size_t MetricReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(rows_.begin(), rows_.end(), [](const auto& r) { return std::isnan(r.second.mse); }));
}

namespace {

template <class F>
std::pair<double, double> moments(const std::vector<std::pair<std::string, MetricValues>>& rows, F field) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : rows) {
    const double v = field(r.second);
    if (std::isnan(v)) continue;
    sum += v;
    ++n;
  }
  if (n == 0) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  const double mean = sum / static_cast<double>(n);
  double var = 0.0;
  for (const auto& r : rows) {
    const double v = field(r.second);
    if (!std::isnan(v)) var += (v - mean) * (v - mean);
  }
  return {mean, n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0};
}

}  // namespace

MetricValues MetricReport::mean() const {
  return {moments(rows_, [](const MetricValues& v) { return v.mse; }).first,
          moments(rows_, [](const MetricValues& v) { return v.nrmse; }).first,
          moments(rows_, [](const MetricValues& v) { return v.psnr; }).first,
          moments(rows_, [](const MetricValues& v) { return v.ssim; }).first};
}

MetricValues MetricReport::stddev() const {
  return {moments(rows_, [](const MetricValues& v) { return v.mse; }).second,
          moments(rows_, [](const MetricValues& v) { return v.nrmse; }).second,
          moments(rows_, [](const MetricValues& v) { return v.psnr; }).second,
          moments(rows_, [](const MetricValues& v) { return v.ssim; }).second};
}

void MetricReport::write_csv(std::ostream& out) const {
  auto row = [&out](const std::string& id, const MetricValues& v) {
    out << id << ',' << format_double(v.mse) << ',' << format_double(v.nrmse) << ',' << format_double(v.psnr) << ','
        << format_double(v.ssim) << '\n';
  };
  out << "id,mse,nrmse,psnr,ssim\n";
  for (const auto& r : rows_) row(r.first, r.second);
  row("mean", mean());
  row("std", stddev());
}

}  // namespace ambient
