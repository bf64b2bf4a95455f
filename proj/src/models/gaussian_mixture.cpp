// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/models/gaussian_mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "ambient/operators/signal_space.hpp"

namespace ambient {

void GaussianMixturePrior::validate() const {
  if (weights.empty()) throw std::invalid_argument("mixture has no components");
  if (means.size() != weights.size() || variances.size() != weights.size())
    throw std::invalid_argument("mixture weights, means and variances differ in length");
  double total = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!(weights[k] > 0.0)) throw std::invalid_argument("mixture weight " + std::to_string(k) + " is not positive");
    if (!(variances[k] > 0.0))
      throw std::invalid_argument("mixture variance " + std::to_string(k) + " is not positive");
    if (means[k].size() != means.front().size() || means[k].size() == 0)
      throw std::invalid_argument("mixture means have inconsistent length");
    total += weights[k];
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("mixture weights do not sum to 1");
}

Vec GaussianMixturePrior::mean() const {
  Vec m = Vec::Zero(static_cast<Eigen::Index>(dim()));
  for (std::size_t k = 0; k < components(); ++k) m += weights[k] * means[k];
  return m;
}

Vec GaussianMixturePrior::sample(Rng& rng) const {
  const double u = rng.uniform();
  std::size_t k = 0;
  double acc = weights[0];
  while (u >= acc && k + 1 < components()) acc += weights[++k];
  return means[k] + std::sqrt(variances[k]) * rng.normal_vec(dim());
}

GaussianMixturePrior GaussianMixturePrior::gaussian(Vec mean, double variance) {
  GaussianMixturePrior p;
  p.weights = {1.0};
  p.means = {std::move(mean)};
  p.variances = {variance};
  p.validate();
  return p;
}

namespace {

void normalize_log_weights(std::vector<double>& logw) {
  const double top = *std::max_element(logw.begin(), logw.end());
  double total = 0.0;
  for (auto& v : logw) {
    v = std::exp(v - top);
    total += v;
  }
  for (auto& v : logw) v /= total;
}

void check_sigma(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be finite and >= 0");
}

}  // namespace

Vec gm_denoise(const GaussianMixturePrior& prior, const Vec& x, double sigma) {
  check_sigma(sigma);
  if (static_cast<std::size_t>(x.size()) != prior.dim()) throw std::invalid_argument("gm_denoise: dimension mismatch");
  if (sigma == 0.0) return x;
  const double s2 = sigma * sigma;
  const double d = static_cast<double>(x.size());
  std::vector<double> resp(prior.components());
  for (std::size_t k = 0; k < prior.components(); ++k) {
    const double c = prior.variances[k] + s2;
    resp[k] = std::log(prior.weights[k]) - 0.5 * (x - prior.means[k]).squaredNorm() / c - 0.5 * d * std::log(c);
  }
  normalize_log_weights(resp);
  Vec out = Vec::Zero(x.size());
  for (std::size_t k = 0; k < prior.components(); ++k) {
    const double c = prior.variances[k] + s2;
    out += resp[k] * ((prior.variances[k] * x + s2 * prior.means[k]) / c);
  }
  return out;
}

Tensor gm_denoise(const GaussianMixturePrior& prior, const Tensor& x, double sigma) {
  if (x.is_complex()) {
    const Vec out = gm_denoise(prior, to_channels(x.to_cvec(), Field::complex), sigma);
    return Tensor::from(x.shape(), from_channels(out, Field::complex));
  }
  return Tensor::from(x.shape(), gm_denoise(prior, x.to_vec(), sigma));
}

Vec gm_denoise_vjp(const GaussianMixturePrior& prior, const Vec& x, double sigma, const Vec& cotangent) {
  check_sigma(sigma);
  if (sigma == 0.0) return cotangent;
  const double s2 = sigma * sigma;
  const double d = static_cast<double>(x.size());
  const std::size_t K = prior.components();
  std::vector<double> resp(K);
  std::vector<Vec> means(K);
  for (std::size_t k = 0; k < K; ++k) {
    const double c = prior.variances[k] + s2;
    resp[k] = std::log(prior.weights[k]) - 0.5 * (x - prior.means[k]).squaredNorm() / c - 0.5 * d * std::log(c);
    means[k] = (prior.variances[k] * x + s2 * prior.means[k]) / c;
  }
  normalize_log_weights(resp);
  double mean_dot = 0.0;
  for (std::size_t k = 0; k < K; ++k) mean_dot += resp[k] * means[k].dot(cotangent);
  Vec out = Vec::Zero(x.size());
  double diag = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double c = prior.variances[k] + s2;
    diag += resp[k] * prior.variances[k] / c;
    // score of component k: -(x - mu_k) / c
    out -= resp[k] * (means[k].dot(cotangent) - mean_dot) * (x - prior.means[k]) / c;
  }
  out += diag * cotangent;
  return out;
}

GmAmbientConditioner::GmAmbientConditioner(GaussianMixturePrior prior, Mat m) : prior_(std::move(prior)), m_(std::move(m)) {
  prior_.validate();
  if (static_cast<std::size_t>(m_.cols()) != prior_.dim())
    throw std::invalid_argument("conditioner matrix has " + std::to_string(m_.cols()) + " columns, prior dim is " +
                                std::to_string(prior_.dim()));
  const Mat g = m_ * m_.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> eig(g);
  const Vec& lambda = eig.eigenvalues();
  const double top = lambda.size() ? lambda.cwiseAbs().maxCoeff() : 0.0;
  const double tol = top * 1e-10 * static_cast<double>(std::max<Eigen::Index>(g.rows(), 1));
  Vec inv = Vec::Zero(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] > tol) {
      inv[i] = 1.0 / lambda[i];
      ++rank_;
    }
  }
  g_pinv_ = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
  back_ = m_.transpose() * g_pinv_;
  for (const auto& mu : prior_.means) {
    Vec mm = m_ * mu;
    Vec gmm = g_pinv_ * mm;
    mu_quad_.push_back(mm.dot(gmm));
    proj_mu_.push_back(m_.transpose() * gmm);
    m_mu_.push_back(std::move(mm));
    g_m_mu_.push_back(std::move(gmm));
  }
}

GmAmbientConditioner::GmAmbientConditioner(GaussianMixturePrior prior, const LinearOp& op, Field field)
    : GmAmbientConditioner(std::move(prior), channel_matrix(op, field)) {}

GmAmbientConditioner::Terms GmAmbientConditioner::terms(const Vec& y, double sigma, bool need_scores) const {
  check_sigma(sigma);
  if (y.size() != m_.rows())
    throw std::invalid_argument("conditioner input has length " + std::to_string(y.size()) + ", expected " +
                                std::to_string(m_.rows()));
  if (sigma == 0.0 && !full_rank())
    throw std::domain_error("singular conditioning covariance: sigma = 0 with a rank-deficient operator");
  const std::size_t K = prior_.components();
  const double s2 = sigma * sigma;
  const double r = static_cast<double>(rank_);
  const Vec gy = g_pinv_ * y;
  const Vec by = back_ * y;
  const double yq = y.dot(gy);
  Terms t;
  t.resp.resize(K);
  t.cond_means.resize(K);
  t.shrink.resize(K);
  if (need_scores) t.scores.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    const double c = prior_.variances[k] + s2;
    if (!(c > 0.0)) throw std::domain_error("singular conditioning covariance");
    const double q = std::max(0.0, yq - 2.0 * y.dot(g_m_mu_[k]) + mu_quad_[k]);
    t.resp[k] = std::log(prior_.weights[k]) - 0.5 * q / c - 0.5 * r * std::log(c);
    t.shrink[k] = prior_.variances[k] / c;
    t.cond_means[k] = prior_.means[k] + t.shrink[k] * (by - proj_mu_[k]);
    if (need_scores) t.scores[k] = -(gy - g_m_mu_[k]) / c;
  }
  normalize_log_weights(t.resp);
  return t;
}

Vec GmAmbientConditioner::denoise(const Vec& y, double sigma) const {
  const Terms t = terms(y, sigma, false);
  Vec out = Vec::Zero(static_cast<Eigen::Index>(prior_.dim()));
  for (std::size_t k = 0; k < t.resp.size(); ++k) out += t.resp[k] * t.cond_means[k];
  return out;
}

Vec GmAmbientConditioner::vjp(const Vec& y, double sigma, const Vec& cotangent) const {
  const Terms t = terms(y, sigma, true);
  double mean_dot = 0.0;
  double shrink = 0.0;
  for (std::size_t k = 0; k < t.resp.size(); ++k) {
    mean_dot += t.resp[k] * t.cond_means[k].dot(cotangent);
    shrink += t.resp[k] * t.shrink[k];
  }
  Vec out = shrink * (back_.transpose() * cotangent);
  for (std::size_t k = 0; k < t.resp.size(); ++k)
    out += t.resp[k] * (t.cond_means[k].dot(cotangent) - mean_dot) * t.scores[k];
  return out;
}

Vec gm_ambient_denoise(const GaussianMixturePrior& prior, const Vec& y, const LinearOp& op, Field field, double sigma) {
  return GmAmbientConditioner(prior, op, field).denoise(y, sigma);
}

Tensor gm_ambient_denoise(const GaussianMixturePrior& prior, const Tensor& y, const LinearOp& op, double sigma) {
  const Field field = prior.dim() == 2 * op.input_size() ? Field::complex : Field::real;
  const Vec out = gm_ambient_denoise(prior, to_channels(y.to_cvec(), op.output_field(field)), op, field, sigma);
  if (field == Field::real) return Tensor::from(op.input_shape(), out);
  return Tensor::from(op.input_shape(), from_channels(out, field));
}

}  // namespace ambient
