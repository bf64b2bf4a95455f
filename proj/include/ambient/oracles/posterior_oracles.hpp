// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "ambient/models/gaussian_mixture.hpp"
#include "ambient/models/training.hpp"
#include "ambient/operators/mask.hpp"
#include "ambient/oracles/mask_oracles.hpp"
#include "ambient/oracles/report.hpp"

namespace ambient {

/// Finitely supported prior over real-channel vectors.
struct DiscretePrior {
  std::vector<Vec> atoms;
  std::vector<double> weights;

  std::size_t size() const { return atoms.size(); }
  std::size_t dim() const { return atoms.empty() ? 0 : static_cast<std::size_t>(atoms.front().size()); }
  void validate() const;
  Vec mean() const;
  std::size_t draw(Rng& rng) const;

  /// Mixture with the same atoms and a common tiny variance.
  GaussianMixturePrior as_mixture(double variance) const;
  /// Uniform prior over `count` atoms with i.i.d. N(0, scale^2) entries.
  static DiscretePrior random(std::size_t count, std::size_t dim, double scale, std::uint64_t seed);
};

inline constexpr std::size_t kMaxPriorAtoms = 64;

/// E[x0 | M (x0 + sigma eta) = y] by enumerating the atoms; the Gaussian
/// likelihood lives on the range of M (pseudo-inverse of sigma^2 M M^T).
Vec bruteforce_posterior_mean(const DiscretePrior& prior, const Vec& y, const Mat& m, double sigma);
/// Diagonal 0/1 corruption: only kept channels enter the likelihood.
Vec bruteforce_posterior_mean(const DiscretePrior& prior, const Vec& y, const MaskSpec& mask, Field field,
                              double sigma);

/// One held-out input for comparing a trained model with the oracle.
struct PosteriorCase {
  Vec input;          // A~ (x0 + sigma eta)
  MaskSpec corrupted; // A~
  double sigma = 0.0;
  Vec oracle;         // E[x0 | input, A~]
};

/// Draws `per_sigma` cases per noise level: x0 from the prior, A from
/// `dist`, A~ by erasure `delta`, then evaluates the oracle.
std::vector<PosteriorCase> posterior_grid(const DiscretePrior& prior, const MaskDistribution& dist, double delta,
                                          const std::vector<double>& sigmas, std::size_t per_sigma,
                                          std::uint64_t seed);

/// Max over noise levels of ||h - oracle|| / ||oracle||, norms taken over all
/// cases at that level stacked together. Passes below `tolerance`.
OracleReport theorem1_check(const AmbientDenoiseFn& model, const std::vector<PosteriorCase>& grid,
                            double tolerance = 0.05);

}  // namespace ambient
