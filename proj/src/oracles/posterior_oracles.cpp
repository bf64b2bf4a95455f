// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/oracles/posterior_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include <Eigen/SVD>

namespace ambient {

void DiscretePrior::validate() const {
  if (atoms.empty()) throw std::invalid_argument("discrete prior has no atoms");
  if (atoms.size() > kMaxPriorAtoms)
    throw std::invalid_argument("discrete prior has " + std::to_string(atoms.size()) + " atoms, limit is " +
                                std::to_string(kMaxPriorAtoms));
  if (weights.size() != atoms.size()) throw std::invalid_argument("one weight per atom required");
  double total = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (!(weights[k] > 0.0)) throw std::invalid_argument("atom weights must be positive");
    if (atoms[k].size() != atoms.front().size()) throw std::invalid_argument("atoms differ in length");
    total += weights[k];
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("atom weights do not sum to 1");
}

Vec DiscretePrior::mean() const {
  Vec m = Vec::Zero(static_cast<Eigen::Index>(dim()));
  for (std::size_t k = 0; k < size(); ++k) m += weights[k] * atoms[k];
  return m;
}

std::size_t DiscretePrior::draw(Rng& rng) const {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < size(); ++k) {
    acc += weights[k];
    if (u < acc) return k;
  }
  return size() - 1;
}

GaussianMixturePrior DiscretePrior::as_mixture(double variance) const {
  GaussianMixturePrior p;
  p.weights = weights;
  p.means = atoms;
  p.variances.assign(size(), variance);
  p.validate();
  return p;
}

DiscretePrior DiscretePrior::random(std::size_t count, std::size_t dim, double scale, std::uint64_t seed) {
  Rng rng(seed);
  DiscretePrior p;
  for (std::size_t k = 0; k < count; ++k) p.atoms.push_back(scale * rng.normal_vec(dim));
  p.weights.assign(count, 1.0 / static_cast<double>(count));
  p.validate();
  return p;
}

namespace {

Vec combine(const DiscretePrior& prior, std::vector<double> logw) {
  const double top = *std::max_element(logw.begin(), logw.end());
  if (!std::isfinite(top)) throw std::domain_error("degenerate likelihood: no atom has positive density");
  double total = 0.0;
  for (auto& v : logw) {
    v = std::exp(v - top);
    total += v;
  }
  Vec out = Vec::Zero(static_cast<Eigen::Index>(prior.dim()));
  for (std::size_t k = 0; k < prior.size(); ++k) out += (logw[k] / total) * prior.atoms[k];
  return out;
}

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("oracle needs a finite sigma > 0");
}

}  // namespace

Vec bruteforce_posterior_mean(const DiscretePrior& prior, const Vec& y, const Mat& m, double sigma) {
  prior.validate();
  check_sigma(sigma);
  if (static_cast<std::size_t>(m.cols()) != prior.dim() || y.size() != m.rows())
    throw std::invalid_argument("oracle operator does not match the prior or the input");
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const Vec& s = svd.singularValues();
  const double tol = (s.size() ? s[0] : 0.0) * 1e-10 * static_cast<double>(std::max(m.rows(), m.cols()));
  std::vector<double> logw(prior.size());
  for (std::size_t k = 0; k < prior.size(); ++k) {
    // (y - M x)^T (M M^T)^+ (y - M x) = sum over nonzero s_i of (u_i^T r / s_i)^2
    const Vec proj = svd.matrixU().transpose() * (y - m * prior.atoms[k]);
    double q = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s[i] > tol) q += (proj[i] / s[i]) * (proj[i] / s[i]);
    logw[k] = std::log(prior.weights[k]) - 0.5 * q / (sigma * sigma);
  }
  return combine(prior, std::move(logw));
}

Vec bruteforce_posterior_mean(const DiscretePrior& prior, const Vec& y, const MaskSpec& mask, Field field,
                              double sigma) {
  prior.validate();
  check_sigma(sigma);
  const std::size_t per = field == Field::complex ? 2 : 1;
  if (mask.entries() * per != prior.dim() || static_cast<std::size_t>(y.size()) != prior.dim())
    throw std::invalid_argument("oracle mask does not match the prior or the input");
  std::vector<double> logw(prior.size());
  for (std::size_t k = 0; k < prior.size(); ++k) {
    double q = 0.0;
    for (std::size_t i = 0; i < prior.dim(); ++i) {
      if (!mask.keep[i / per]) continue;
      const double r = y[static_cast<Eigen::Index>(i)] - prior.atoms[k][static_cast<Eigen::Index>(i)];
      q += r * r;
    }
    logw[k] = std::log(prior.weights[k]) - 0.5 * q / (sigma * sigma);
  }
  return combine(prior, std::move(logw));
}

std::vector<PosteriorCase> posterior_grid(const DiscretePrior& prior, const MaskDistribution& dist, double delta,
                                          const std::vector<double>& sigmas, std::size_t per_sigma,
                                          std::uint64_t seed) {
  if (dist.kind != MaskKind::pixel) throw std::invalid_argument("posterior grid uses pixel masks");
  const Field field = prior.dim() == 2 * shape_size(dist.shape) ? Field::complex : Field::real;
  Rng rng(seed);
  std::vector<PosteriorCase> out;
  for (double sigma : sigmas) {
    for (std::size_t i = 0; i < per_sigma; ++i) {
      PosteriorCase c;
      const Vec& x0 = prior.atoms[prior.draw(rng)];
      const MaskSpec a = dist.draw(rng);
      c.corrupted = further_corrupt(a, CorruptionPolicy::erase(delta), rng);
      c.sigma = sigma;
      const Vec noisy = x0 + sigma * rng.normal_vec(prior.dim());
      c.input = noisy;
      const std::size_t per = field == Field::complex ? 2 : 1;
      for (std::size_t j = 0; j < prior.dim(); ++j)
        if (!c.corrupted.keep[j / per]) c.input[static_cast<Eigen::Index>(j)] = 0.0;
      c.oracle = bruteforce_posterior_mean(prior, c.input, c.corrupted, field, sigma);
      out.push_back(std::move(c));
    }
  }
  return out;
}

OracleReport theorem1_check(const AmbientDenoiseFn& model, const std::vector<PosteriorCase>& grid, double tolerance) {
  if (grid.empty()) throw std::invalid_argument("empty test grid");
  std::map<double, std::pair<double, double>> per_level;  // sigma -> (sum |h - o|^2, sum |o|^2)
  for (const auto& c : grid) {
    const Vec h = model(c.input, c.corrupted, c.sigma);
    auto& acc = per_level[c.sigma];
    acc.first += (h - c.oracle).squaredNorm();
    acc.second += c.oracle.squaredNorm();
  }
  OracleReport r;
  r.claim = "theorem1";
  r.estimate = 0.0;
  for (const auto& [sigma, acc] : per_level) {
    const double dev = acc.second > 0.0 ? std::sqrt(acc.first / acc.second) : std::sqrt(acc.first);
    r.estimate = std::max(r.estimate, dev);
  }
  r.tolerance = tolerance;
  r.trials = grid.size();
  r.reference = 0.0;
  r.pass = r.estimate < tolerance;
  return r;
}

}  // namespace ambient
