// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/mri_sim/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ambient/numerics/fft.hpp"

namespace ambient {

namespace {

std::span<cplx> span_of(CVec& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

KspaceData acquire(const CVec& image, const CoilMaps& coils, const MaskSpec& mask) {
  if (coils.shape != mask.shape) throw std::invalid_argument("coil and mask shapes differ");
  if (static_cast<std::size_t>(image.size()) != shape_size(mask.shape))
    throw std::invalid_argument("image size does not match the mask shape");
  KspaceData d;
  d.mask = mask;
  d.coils = coils;
  for (const auto& s : coils.maps) {
    CVec z = s.cwiseProduct(image);
    fftn(span_of(z), mask.shape, false, true);
    for (Eigen::Index i = 0; i < z.size(); ++i)
      if (!mask.keep[static_cast<std::size_t>(i)]) z[i] = 0.0;
    d.kspace.push_back(std::move(z));
  }
  return d;
}

KspaceData acquire(const Phantom& phantom, const CoilMaps& coils, const MaskSpec& mask) {
  if (phantom.shape != mask.shape) throw std::invalid_argument("phantom and mask shapes differ");
  return acquire(phantom.image, coils, mask);
}

std::vector<CVec> coil_images(const KspaceData& data) {
  std::vector<CVec> out;
  for (CVec z : data.kspace) {
    fftn(span_of(z), data.shape(), true, true);
    out.push_back(std::move(z));
  }
  return out;
}

CVec adjoint_combine(const std::vector<CVec>& kspace, const CoilMaps& coils) {
  if (kspace.size() != coils.count()) throw std::invalid_argument("coil count mismatch");
  CVec out = CVec::Zero(static_cast<Eigen::Index>(shape_size(coils.shape)));
  for (std::size_t i = 0; i < kspace.size(); ++i) {
    CVec z = kspace[i];
    fftn(span_of(z), coils.shape, true, true);
    out += coils.maps[i].conjugate().cwiseProduct(z);
  }
  return out;
}

CVec adjoint_combine(const KspaceData& data) { return adjoint_combine(data.kspace, data.coils); }

Vec root_sum_of_squares(const std::vector<CVec>& images) {
  if (images.empty()) throw std::invalid_argument("no coil images");
  Vec acc = Vec::Zero(images.front().size());
  for (const auto& im : images) acc += im.cwiseAbs2();
  return acc.cwiseSqrt();
}

KspaceData prewhiten(KspaceData data) { return data; }

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of nothing");
  std::sort(values.begin(), values.end());
  const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double normalization_scale(const KspaceData& data) {
  const Shape& shape = data.shape();
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (auto n : shape) {
    const std::size_t w = std::min(kNormalizationBlock, n);
    const std::size_t start = n / 2 - w / 2;
    ranges.emplace_back(start, start + w);
  }
  std::vector<CVec> images;
  for (const auto& z : data.kspace) {
    CVec block = CVec::Zero(z.size());
    for (std::size_t i = 0; i < static_cast<std::size_t>(z.size()); ++i) {
      std::size_t rem = i;
      bool inside = true;
      for (std::size_t a = shape.size(); a-- > 0;) {
        const std::size_t idx = rem % shape[a];
        rem /= shape[a];
        inside = inside && idx >= ranges[a].first && idx < ranges[a].second;
      }
      if (inside) block[static_cast<Eigen::Index>(i)] = z[static_cast<Eigen::Index>(i)];
    }
    fftn(span_of(block), shape, true, true);
    images.push_back(std::move(block));
  }
  const Vec rss = root_sum_of_squares(images);
  const double scale = percentile(std::vector<double>(rss.begin(), rss.end()), 99.0);
  if (!(scale > 0.0)) throw std::domain_error("zero energy in the central k-space block");
  return scale;
}

NormalizedKspace normalize(const KspaceData& data) {
  NormalizedKspace out{data, normalization_scale(data)};
  for (auto& z : out.data.kspace) z /= out.scale;
  return out;
}

}  // namespace ambient
