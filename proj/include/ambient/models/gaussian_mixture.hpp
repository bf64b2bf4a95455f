// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ambient/numerics/rng.hpp"
#include "ambient/numerics/tensor.hpp"
#include "ambient/operators/linear_op.hpp"

namespace ambient {

/// Isotropic Gaussian mixture over real-channel vectors:
/// p(x) = sum_k w_k N(x; mu_k, tau_k^2 I).
struct GaussianMixturePrior {
  std::vector<double> weights;
  std::vector<Vec> means;
  std::vector<double> variances;

  std::size_t components() const { return weights.size(); }
  std::size_t dim() const { return means.empty() ? 0 : static_cast<std::size_t>(means.front().size()); }

  /// Throws std::invalid_argument unless weights are positive and sum to 1,
  /// variances are positive and every mean has the same length.
  void validate() const;

  Vec mean() const;
  Vec sample(Rng& rng) const;

  static GaussianMixturePrior gaussian(Vec mean, double variance);
};

/// E[x0 | x0 + sigma eta = x].
Vec gm_denoise(const GaussianMixturePrior& prior, const Vec& x, double sigma);
Tensor gm_denoise(const GaussianMixturePrior& prior, const Tensor& x, double sigma);

/// J^T u for the Jacobian J of gm_denoise at x. J = Cov[x0 | x] / sigma^2 is
/// symmetric, so this is also J u.
Vec gm_denoise_vjp(const GaussianMixturePrior& prior, const Vec& x, double sigma, const Vec& cotangent);

/// E[x0 | M (x0 + sigma eta) = y] for a fixed real matrix M, evaluated with
/// per-component Gaussian conditioning on the range of M.
class GmAmbientConditioner {
 public:
  GmAmbientConditioner(GaussianMixturePrior prior, Mat m);
  /// Uses the real-channel matrix of `op` for inputs in `field`.
  GmAmbientConditioner(GaussianMixturePrior prior, const LinearOp& op, Field field);

  /// Throws std::domain_error when sigma = 0 and M is rank-deficient.
  Vec denoise(const Vec& y, double sigma) const;
  /// (dE/dy)^T u.
  Vec vjp(const Vec& y, double sigma, const Vec& cotangent) const;

  std::size_t rank() const { return rank_; }
  bool full_rank() const { return rank_ == prior_.dim(); }
  const Mat& matrix() const { return m_; }
  const GaussianMixturePrior& prior() const { return prior_; }

 private:
  struct Terms {
    std::vector<double> resp;
    std::vector<Vec> cond_means;
    std::vector<Vec> scores;  // d log N_k(y) / dy
    std::vector<double> shrink;
  };
  Terms terms(const Vec& y, double sigma, bool need_scores) const;

  GaussianMixturePrior prior_;
  Mat m_;
  Mat g_pinv_;     // (M M^T)^+
  Mat back_;       // M^T (M M^T)^+
  std::size_t rank_ = 0;
  std::vector<Vec> m_mu_;       // M mu_k
  std::vector<Vec> proj_mu_;    // M^T (M M^T)^+ M mu_k
  std::vector<Vec> g_m_mu_;     // (M M^T)^+ M mu_k
  std::vector<double> mu_quad_; // mu_k^T M^T (M M^T)^+ M mu_k
};

Vec gm_ambient_denoise(const GaussianMixturePrior& prior, const Vec& y, const LinearOp& op, Field field, double sigma);
Tensor gm_ambient_denoise(const GaussianMixturePrior& prior, const Tensor& y, const LinearOp& op, double sigma);

}  // namespace ambient
