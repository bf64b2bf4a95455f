// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/diffusion/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace ambient {

double NoiseSchedule::g(double t) const { return std::sqrt(2.0 * sigma_dot(t) * sigma(t)); }

void NoiseSchedule::validate() const {
  if (!(sigma_min >= 0.0 && sigma_max > sigma_min)) throw std::invalid_argument("need 0 <= sigma_min < sigma_max");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
}

std::vector<double> NoiseSchedule::time_grid(std::size_t steps) const {
  validate();
  if (steps < 2) throw std::invalid_argument("time grid needs at least 2 points");
  std::vector<double> grid(steps);
  const double last = static_cast<double>(steps - 1);
  if (spacing == GridSpacing::linear) {
    for (std::size_t i = 0; i < steps; ++i)
      grid[i] = t_max() + (static_cast<double>(i) / last) * (t_min() - t_max());
  } else {
    const double hi = std::pow(t_max(), 1.0 / rho);
    const double lo = std::pow(t_min(), 1.0 / rho);
    for (std::size_t i = 0; i < steps; ++i) grid[i] = std::pow(hi + (static_cast<double>(i) / last) * (lo - hi), rho);
  }
  grid.front() = t_max();
  grid.back() = t_min();
  return grid;
}

NoiseSchedule NoiseSchedule::from_config(const KeyValues& kv) {
  NoiseSchedule s;
  s.sigma_min = kv.get_double_or("sigma_min", s.sigma_min);
  s.sigma_max = kv.get_double_or("sigma_max", s.sigma_max);
  s.rho = kv.get_double_or("rho", s.rho);
  const std::string spacing = kv.get_or("spacing", "edm");
  if (spacing == "linear")
    s.spacing = GridSpacing::linear;
  else if (spacing != "edm")
    throw std::invalid_argument("unknown grid spacing '" + spacing + "'");
  s.validate();
  return s;
}

void NoiseSchedule::write_config(KeyValues& kv) const {
  kv.set("sigma_min", sigma_min);
  kv.set("sigma_max", sigma_max);
  kv.set("rho", rho);
  kv.set("spacing", spacing == GridSpacing::linear ? "linear" : "edm");
}

std::vector<double> time_grid(const NoiseSchedule& schedule, std::size_t steps) { return schedule.time_grid(steps); }

namespace {

double checked_sigma(double t, const NoiseSchedule& schedule) {
  if (!(t >= schedule.t_min() && t <= schedule.t_max()))
    throw std::invalid_argument("time " + std::to_string(t) + " outside [t_min, t_max]");
  return schedule.sigma(t);
}

}  // namespace

Tensor add_noise(const Tensor& x0, double t, Rng& rng, const NoiseSchedule& schedule) {
  const double sigma = checked_sigma(t, schedule);
  if (x0.is_complex()) {
    const CVec x = x0.to_cvec() + sigma * rng.complex_normal_vec(x0.size());
    return Tensor::from(x0.shape(), x).astype(x0.dtype());
  }
  return Tensor::from(x0.shape(), add_noise(x0.to_vec(), t, rng, schedule)).astype(x0.dtype());
}

Vec add_noise(const Vec& x0, double t, Rng& rng, const NoiseSchedule& schedule) {
  const double sigma = checked_sigma(t, schedule);
  return x0 + sigma * rng.normal_vec(static_cast<std::size_t>(x0.size()));
}

}  // namespace ambient
