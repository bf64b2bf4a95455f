// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/operators/coils.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ambient/numerics/rng.hpp"

namespace ambient {

double CoilMaps::normalization_residual() const {
  if (maps.empty()) return 1.0;
  Vec total = Vec::Zero(maps.front().size());
  for (const auto& s : maps) total += s.cwiseAbs2();
  return (total.array() - 1.0).abs().maxCoeff();
}

CoilMaps CoilMaps::identity(const Shape& shape) {
  return CoilMaps{shape, {CVec::Ones(static_cast<Eigen::Index>(shape_size(shape)))}};
}

Tensor CoilMaps::to_tensor() const {
  Shape full{count()};
  full.insert(full.end(), shape.begin(), shape.end());
  std::vector<cplx> flat;
  flat.reserve(shape_size(full));
  for (const auto& s : maps) flat.insert(flat.end(), s.data(), s.data() + s.size());
  return Tensor::complex(full, std::move(flat));
}

CoilMaps CoilMaps::from_tensor(const Tensor& t) {
  if (t.ndim() < 2) throw std::invalid_argument("coil tensor needs a leading coil axis");
  CoilMaps c;
  c.shape.assign(t.shape().begin() + 1, t.shape().end());
  const CVec flat = t.to_cvec();
  const auto n = static_cast<Eigen::Index>(shape_size(c.shape));
  for (std::size_t i = 0; i < t.shape()[0]; ++i) c.maps.push_back(flat.segment(static_cast<Eigen::Index>(i) * n, n));
  return c;
}

CoilMaps make_coil_maps(const Shape& shape, std::size_t coils, double smoothness, std::uint64_t seed) {
  if (coils < 1) throw std::invalid_argument("need at least one coil");
  if (!(smoothness > 0.0)) throw std::invalid_argument("coil smoothness must be positive");
  if (shape.size() > 2) throw std::invalid_argument("coil maps support 1-D and 2-D grids");
  const std::size_t n = shape_size(shape);
  const std::size_t rows = shape.size() == 2 ? shape[0] : 1;
  const std::size_t cols = shape.back();
  const double pi = std::numbers::pi;

  Rng rng(seed);
  CoilMaps out{shape, {}};
  for (std::size_t c = 0; c < coils; ++c) {
    const double angle = 2.0 * pi * (static_cast<double>(c) + 0.3 * rng.uniform()) / static_cast<double>(coils);
    const double radius = 1.0 + 0.4 * rng.uniform();
    // 1-D grids place the coils along the single axis.
    const double cx = radius * std::cos(angle);
    const double cy = shape.size() == 2 ? radius * std::sin(angle) : 0.0;
    const double slope_x = (rng.uniform() - 0.5) * pi;
    const double slope_y = (rng.uniform() - 0.5) * pi;
    const double phase0 = 2.0 * pi * rng.uniform();

    CVec s(static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < rows; ++r) {
      const double y = rows > 1 ? 2.0 * static_cast<double>(r) / static_cast<double>(rows) - 1.0 : 0.0;
      for (std::size_t q = 0; q < cols; ++q) {
        const double x = 2.0 * static_cast<double>(q) / static_cast<double>(cols) - 1.0;
        const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        const double mag = std::exp(-d2 / (2.0 * smoothness * smoothness));
        s[static_cast<Eigen::Index>(r * cols + q)] = std::polar(mag, phase0 + slope_x * x + slope_y * y);
      }
    }
    out.maps.push_back(std::move(s));
  }

  Vec total = Vec::Zero(static_cast<Eigen::Index>(n));
  for (const auto& s : out.maps) total += s.cwiseAbs2();
  if ((total.array() <= 0.0).any()) throw std::runtime_error("coil profiles vanish somewhere; increase smoothness");
  const Vec inv = total.cwiseSqrt().cwiseInverse();
  for (auto& s : out.maps) s = s.cwiseProduct(inv.cast<cplx>());
  return out;
}

}  // namespace ambient
