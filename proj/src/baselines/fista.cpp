// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/baselines/fista.hpp"

#include <cmath>
#include <stdexcept>

#include "ambient/numerics/haar.hpp"
#include "ambient/numerics/rng.hpp"

namespace ambient {

void FistaConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite and >= 0");
  if (iterations == 0) throw std::invalid_argument("FISTA needs at least one iteration");
  if (levels < 0) throw std::invalid_argument("Haar levels must be >= 0");
  if (power_iterations == 0) throw std::invalid_argument("power iteration count must be positive");
}

void FistaConfig::write_config(KeyValues& kv) const {
  kv.set("lambda", lambda);
  kv.set("fista_iters", iterations);
  kv.set("haar_levels", levels);
}

FistaConfig FistaConfig::from_config(const KeyValues& kv) {
  FistaConfig c;
  c.lambda = kv.get_double_or("lambda", c.lambda);
  c.iterations = kv.get_u64_or("fista_iters", c.iterations);
  c.levels = static_cast<int>(kv.get_int_or("haar_levels", c.levels));
  c.validate();
  return c;
}

namespace {

int resolve_levels(const Shape& shape, int levels) { return levels > 0 ? levels : max_haar_levels(shape); }

std::span<cplx> span_of(CVec& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

double wavelet_l1(const CVec& x, const Shape& shape, int levels) {
  CVec w = x;
  if (levels > 0) haar_fwd_inplace(span_of(w), shape, levels);
  return w.cwiseAbs().sum();
}

}  // namespace

double operator_norm_squared(const LinearOp& op, std::size_t iterations, std::uint64_t seed) {
  Rng rng(seed);
  CVec v = rng.complex_normal_vec(op.input_size());
  v /= v.norm();
  double estimate = 0.0;
  for (std::size_t i = 0; i < iterations; ++i) {
    const CVec av = op.apply(v);
    estimate = av.squaredNorm() / v.squaredNorm();
    CVec next = op.adjoint(av);
    const double n = next.norm();
    if (n == 0.0) return 0.0;
    v = next / n;
  }
  const CVec av = op.apply(v);
  return std::max(estimate, av.squaredNorm() / v.squaredNorm());
}

double l1wavelet_objective(const CVec& x, const CVec& y, const LinearOp& op, double lambda, int levels) {
  const int lv = resolve_levels(op.input_shape(), levels);
  const double fit = 0.5 * (op.apply(x) - y).squaredNorm();
  return lambda == 0.0 ? fit : fit + lambda * wavelet_l1(x, op.input_shape(), lv);
}

CVec haar_soft_threshold(const CVec& x, const Shape& shape, double tau, int levels) {
  if (tau == 0.0) return x;
  CVec w = x;
  if (levels > 0) haar_fwd_inplace(span_of(w), shape, levels);
  for (auto& c : w) {
    const double mag = std::abs(c);
    c = mag > tau ? c * (1.0 - tau / mag) : cplx(0.0, 0.0);
  }
  if (levels > 0) haar_inv_inplace(span_of(w), shape, levels);
  return w;
}

FistaResult fista_l1wavelet(const CVec& y, const LinearOp& op, const FistaConfig& config) {
  config.validate();
  if (static_cast<std::size_t>(y.size()) != op.output_size())
    throw std::invalid_argument("measurement length does not match the operator");
  const Shape& shape = op.input_shape();
  const int levels = resolve_levels(shape, config.levels);
  FistaResult r;
  r.lipschitz = operator_norm_squared(op, config.power_iterations, config.seed);
  if (!(r.lipschitz > 0.0)) throw std::domain_error("operator norm is zero");
  const double step = 1.0 / r.lipschitz;
  const double tau = config.lambda * step;

  const auto n = static_cast<Eigen::Index>(op.input_size());
  CVec x = CVec::Zero(n);
  CVec x_prev = x;
  CVec v = x;
  double fx = l1wavelet_objective(x, y, op, config.lambda, levels);
  double t = 1.0;
  for (std::size_t k = 0; k < config.iterations; ++k) {
    const CVec grad = op.adjoint(op.apply(v) - y);
    const CVec z = haar_soft_threshold(v - step * grad, shape, tau, levels);
    const double fz = l1wavelet_objective(z, y, op, config.lambda, levels);
    r.objective.push_back(std::min(fz, fx));
    if (fz > fx) {
      // Momentum restart from the best iterate.
      t = 1.0;
      v = x;
      continue;
    }
    x_prev = x;
    x = z;
    fx = fz;
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    v = x + ((t - 1.0) / t_next) * (x - x_prev);
    t = t_next;
  }
  r.x = std::move(x);
  return r;
}

double fista_stationarity(const CVec& x, const CVec& y, const LinearOp& op, double lambda, double lipschitz,
                          int levels) {
  const int lv = resolve_levels(op.input_shape(), levels);
  const CVec grad = op.adjoint(op.apply(x) - y);
  const CVec p = haar_soft_threshold(x - grad / lipschitz, op.input_shape(), lambda / lipschitz, lv);
  return (x - p).norm();
}

}  // namespace ambient
