// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ambient/numerics/kv_file.hpp"
#include "ambient/numerics/rng.hpp"
#include "ambient/numerics/tensor.hpp"

namespace ambient {

enum class GridSpacing { edm_rho, linear };

/// Variance-exploding schedule sigma(t) = t on [sigma_min, sigma_max].
///
/// g(t)^2 = 2 sigma_dot(t) sigma(t); the reverse-time grid follows the EDM
/// rho-spacing by default.
struct NoiseSchedule {
  double sigma_min = 0.002;
  double sigma_max = 80.0;
  double rho = 7.0;
  GridSpacing spacing = GridSpacing::edm_rho;

  double t_min() const { return sigma_min; }
  double t_max() const { return sigma_max; }
  double sigma(double t) const { return t; }
  double sigma_dot(double /*t*/) const { return 1.0; }
  double g(double t) const;

  void validate() const;

  /// Strictly decreasing grid of `steps` times from t_max to t_min.
  std::vector<double> time_grid(std::size_t steps) const;

  /// Keys: sigma_min, sigma_max, rho (missing keys keep defaults).
  static NoiseSchedule from_config(const KeyValues& kv);
  void write_config(KeyValues& kv) const;
};

std::vector<double> time_grid(const NoiseSchedule& schedule, std::size_t steps);

/// x0 + sigma(t) eta with eta standard normal (complex tensors draw real and
/// imaginary parts independently, each of unit variance).
Tensor add_noise(const Tensor& x0, double t, Rng& rng, const NoiseSchedule& schedule = {});
Vec add_noise(const Vec& x0, double t, Rng& rng, const NoiseSchedule& schedule = {});

}  // namespace ambient
