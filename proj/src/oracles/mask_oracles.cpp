// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/oracles/mask_oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/SVD>

#include "ambient/numerics/fft.hpp"

namespace ambient {

MaskDistribution MaskDistribution::pixel(const Shape& shape, double erasure) {
  MaskDistribution d;
  d.kind = MaskKind::pixel;
  d.shape = shape;
  d.erasure = erasure;
  return d;
}

MaskDistribution MaskDistribution::kspace(const Shape& shape, double acceleration, std::size_t acs_lines) {
  MaskDistribution d;
  d.kind = MaskKind::kspace_line;
  d.shape = shape;
  d.acceleration = acceleration;
  d.acs_lines = acs_lines;
  return d;
}

MaskSpec MaskDistribution::draw(Rng& rng) const {
  if (kind == MaskKind::pixel) return make_pixel_mask(shape, erasure, rng.next_u64());
  return make_kspace_mask(shape, acceleration, acs_lines, rng.next_u64());
}

namespace {

void check_compatible(const MaskDistribution& dist, const MaskSpec& p_tilde) {
  if (p_tilde.kind != dist.kind) throw std::invalid_argument("P~ and the mask law differ in kind");
  if (p_tilde.shape != dist.shape) throw std::invalid_argument("P~ and the mask law differ in shape");
}

}  // namespace

Vec exact_expected_mask(const MaskDistribution& dist, const CorruptionPolicy& policy, const MaskSpec& p_tilde) {
  check_compatible(dist, p_tilde);
  Vec out(static_cast<Eigen::Index>(p_tilde.entries()));
  if (dist.kind == MaskKind::pixel) {
    const double p = dist.erasure;
    const double d = policy.delta;
    const double erased_given = (1.0 - p) * d / (p + (1.0 - p) * d);
    for (std::size_t i = 0; i < p_tilde.entries(); ++i)
      out[static_cast<Eigen::Index>(i)] = p_tilde.keep[i] ? 1.0 : erased_given;
    return out;
  }
  const std::size_t n = dist.shape.back();
  const std::size_t k1 = line_budget(n, dist.acceleration);
  const std::size_t k2 = p_tilde.kept_lines();
  if (k2 > k1) throw std::invalid_argument("P~ keeps more lines than P");
  const double fill = n == k2 ? 1.0 : static_cast<double>(k1 - k2) / static_cast<double>(n - k2);
  const auto flags = p_tilde.line_flags();
  for (std::size_t i = 0; i < p_tilde.entries(); ++i) out[static_cast<Eigen::Index>(i)] = flags[i % n] ? 1.0 : fill;
  return out;
}

MaskSpec sample_mask_given(const MaskDistribution& dist, const MaskSpec& p_tilde, Rng& rng) {
  check_compatible(dist, p_tilde);
  if (dist.kind != MaskKind::kspace_line) throw std::invalid_argument("exact conditional sampling needs k-space masks");
  const std::size_t n = dist.shape.back();
  const std::size_t k1 = line_budget(n, dist.acceleration);
  auto flags = p_tilde.line_flags();
  const std::size_t k2 = p_tilde.kept_lines();
  if (k2 > k1) throw std::invalid_argument("P~ keeps more lines than P");
  std::vector<std::size_t> absent;
  for (std::size_t j = 0; j < n; ++j)
    if (!flags[j]) absent.push_back(j);
  for (auto idx : rng.sample_without_replacement(absent.size(), k1 - k2)) flags[absent[idx]] = 1;
  return kspace_mask_from_lines(dist.shape, flags, dist.acceleration, dist.acs_lines);
}

Vec MaskSamples::mean() const {
  if (masks.empty()) throw std::runtime_error("no accepted mask samples");
  Vec m = Vec::Zero(static_cast<Eigen::Index>(masks.front().size()));
  for (const auto& row : masks)
    for (std::size_t i = 0; i < row.size(); ++i) m[static_cast<Eigen::Index>(i)] += row[i];
  return m / static_cast<double>(masks.size());
}

MaskSamples sample_masks_given(const MaskDistribution& dist, const CorruptionPolicy& policy, const MaskSpec& p_tilde,
                               std::size_t trials, std::uint64_t seed) {
  check_compatible(dist, p_tilde);
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  Rng rng(seed);
  MaskSamples s;
  s.masks.reserve(trials);
  if (dist.kind == MaskKind::kspace_line) {
    for (std::size_t t = 0; t < trials; ++t) s.masks.push_back(sample_mask_given(dist, p_tilde, rng).keep);
    s.proposals = trials;
    return s;
  }
  // Rejection: trials counts proposals, acceptance is random.
  for (std::size_t t = 0; t < trials; ++t) {
    const MaskSpec p = dist.draw(rng);
    const MaskSpec pt = further_corrupt(p, policy, rng);
    if (pt.keep == p_tilde.keep) s.masks.push_back(p.keep);
  }
  s.proposals = trials;
  if (s.masks.empty()) throw std::runtime_error("rejection sampler accepted none of " + std::to_string(trials) + " proposals");
  return s;
}

OracleReport expected_mask_fullrank(const MaskDistribution& dist, const CorruptionPolicy& policy,
                                    const MaskSpec& p_tilde, std::size_t trials, std::uint64_t seed,
                                    double tolerance) {
  const MaskSamples s = sample_masks_given(dist, policy, p_tilde, trials, seed);
  const Vec mean = s.mean();
  Eigen::Index arg = 0;
  OracleReport r;
  r.claim = "expected_mask_fullrank";
  r.estimate = mean.minCoeff(&arg);
  const double n = static_cast<double>(s.masks.size());
  r.stderr_ = std::sqrt(std::max(0.0, r.estimate * (1.0 - r.estimate)) / n);
  r.reference = exact_expected_mask(dist, policy, p_tilde).minCoeff();
  r.tolerance = tolerance;
  r.trials = s.masks.size();
  r.seed = seed;
  r.pass = r.estimate > tolerance;
  return r;
}

namespace {

std::span<cplx> span_of(CVec& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

constexpr std::size_t kStderrBatches = 64;

double smallest_singular_value(const CMat& m) {
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()[svd.singularValues().size() - 1];
}

}  // namespace

CMat aggregate_matrix(const CoilMaps& coils, const Vec& mask_mean) {
  const auto n = static_cast<Eigen::Index>(shape_size(coils.shape));
  if (mask_mean.size() != n) throw std::invalid_argument("mask mean does not match the coil grid");
  CMat out = CMat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (const auto& s : coils.maps) {
      CVec v = CVec::Zero(n);
      v[j] = s[j];
      fftn(span_of(v), coils.shape, false, true);
      v = v.cwiseProduct(mask_mean.cast<cplx>());
      fftn(span_of(v), coils.shape, true, true);
      out.col(j) += s.conjugate().cwiseProduct(v);
    }
  }
  return out;
}

CMat fourier_similar_matrix(const Shape& shape, const Vec& mask_mean) {
  return aggregate_matrix(CoilMaps::identity(shape), mask_mean);
}

OracleReport expected_operator_fullrank(const CoilMaps& coils, const MaskDistribution& dist,
                                        const CorruptionPolicy& policy, const MaskSpec& p_tilde, std::size_t trials,
                                        std::uint64_t seed, double tolerance) {
  const std::size_t entries = shape_size(coils.shape);
  if (entries > kMaxOracleEntries)
    throw std::invalid_argument("operator oracle is limited to " + std::to_string(kMaxOracleEntries) +
                                " pixels, got " + std::to_string(entries));
  if (coils.shape != dist.shape) throw std::invalid_argument("coil grid and mask law differ in shape");
  const MaskSamples s = sample_masks_given(dist, policy, p_tilde, trials, seed);
  const CMat mean_op = aggregate_matrix(coils, s.mean());
  const double sigma_min = smallest_singular_value(mean_op);

  // Batch means: the smallest singular value of E[A | P~] is often
  // degenerate, where first-order perturbation of one singular pair fails.
  const std::size_t total = s.masks.size();
  const std::size_t batches = std::min(kStderrBatches, total);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t begin = b * total / batches, end = (b + 1) * total / batches;
    Vec mean = Vec::Zero(static_cast<Eigen::Index>(entries));
    for (std::size_t t = begin; t < end; ++t)
      for (std::size_t j = 0; j < entries; ++j) mean[static_cast<Eigen::Index>(j)] += s.masks[t][j];
    const double value = smallest_singular_value(aggregate_matrix(coils, mean / static_cast<double>(end - begin)));
    sum += value;
    sum2 += value * value;
  }
  const double nb = static_cast<double>(batches);
  const double var = batches > 1 ? std::max(0.0, (sum2 - sum * sum / nb) / (nb - 1)) / nb : 0.0;

  OracleReport r;
  r.claim = "expected_operator_fullrank";
  r.estimate = sigma_min;
  r.stderr_ = std::sqrt(var);
  r.reference = exact_operator_sigma_min(coils, dist, policy, p_tilde);
  r.tolerance = tolerance;
  r.trials = s.masks.size();
  r.seed = seed;
  r.pass = sigma_min > tolerance;
  return r;
}

double exact_operator_sigma_min(const CoilMaps& coils, const MaskDistribution& dist, const CorruptionPolicy& policy,
                                const MaskSpec& p_tilde) {
  return smallest_singular_value(aggregate_matrix(coils, exact_expected_mask(dist, policy, p_tilde)));
}

}  // namespace ambient
