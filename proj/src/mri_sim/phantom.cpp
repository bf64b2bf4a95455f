// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/mri_sim/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ambient/numerics/rng.hpp"

namespace ambient {

namespace {

struct Ellipse {
  double cx, cy, ax, ay, angle, value;
};

double coord(std::size_t i, std::size_t n) {
  return 2.0 * (static_cast<double>(i) - static_cast<double>(n) / 2.0) / static_cast<double>(n);
}

}  // namespace

Phantom make_phantom(const Shape& shape, std::uint64_t seed, const PhantomParams& params) {
  if (shape.empty() || shape.size() > 2) throw std::invalid_argument("phantoms are 1-D or 2-D");
  if (params.min_ellipses == 0 || params.max_ellipses < params.min_ellipses)
    throw std::invalid_argument("bad ellipse count range");
  Rng rng(seed);
  const bool two_d = shape.size() == 2;
  const std::size_t rows = two_d ? shape[0] : 1;
  const std::size_t cols = shape.back();

  const std::size_t count =
      params.min_ellipses + rng.below(params.max_ellipses - params.min_ellipses + 1);
  std::vector<Ellipse> ellipses;
  // A large background ellipse followed by smaller inclusions of either sign.
  ellipses.push_back({0.1 * (rng.uniform() - 0.5), 0.1 * (rng.uniform() - 0.5), 0.7 + 0.2 * rng.uniform(),
                      0.75 + 0.2 * rng.uniform(), std::numbers::pi * (rng.uniform() - 0.5) / 6.0,
                      0.5 + 0.4 * rng.uniform()});
  for (std::size_t e = 1; e < count; ++e) {
    const double v = params.min_intensity + (params.max_intensity - params.min_intensity) * rng.uniform();
    const double sign = rng.bernoulli(0.3) ? -1.0 : 1.0;
    ellipses.push_back({1.0 * (rng.uniform() - 0.5), 1.0 * (rng.uniform() - 0.5), 0.08 + 0.3 * rng.uniform(),
                        0.08 + 0.3 * rng.uniform(), std::numbers::pi * rng.uniform(), sign * v});
  }
  const double phi0 = 2.0 * std::numbers::pi * rng.uniform();
  const double sx = params.max_phase_slope * (2.0 * rng.uniform() - 1.0);
  const double sy = params.max_phase_slope * (2.0 * rng.uniform() - 1.0);

  Phantom p;
  p.shape = shape;
  p.seed = seed;
  p.ellipses = count;
  p.image.resize(static_cast<Eigen::Index>(rows * cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const double y = two_d ? coord(r, rows) : 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double x = coord(c, cols);
      double mag = 0.0;
      for (const auto& el : ellipses) {
        const double dx = x - el.cx;
        const double dy = y - el.cy;
        const double u = std::cos(el.angle) * dx + std::sin(el.angle) * dy;
        const double v = -std::sin(el.angle) * dx + std::cos(el.angle) * dy;
        const double q = two_d ? (u * u) / (el.ax * el.ax) + (v * v) / (el.ay * el.ay) : (dx * dx) / (el.ax * el.ax);
        if (q <= 1.0) mag += el.value;
      }
      mag = std::clamp(mag, 0.0, kPhantomMaxMagnitude);
      const double phase = phi0 + sx * x + sy * y;
      cplx v = std::polar(mag, phase);
      // polar() can land one ulp above the clamp.
      if (std::abs(v) > kPhantomMaxMagnitude) v *= kPhantomMaxMagnitude / std::abs(v);
      p.image[static_cast<Eigen::Index>(r * cols + c)] = v;
    }
  }
  return p;
}

}  // namespace ambient
