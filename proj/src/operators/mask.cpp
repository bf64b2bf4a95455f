// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/operators/mask.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ambient {

const char* to_string(MaskKind kind) { return kind == MaskKind::pixel ? "pixel" : "kspace_line"; }

std::size_t MaskSpec::kept_entries() const {
  return static_cast<std::size_t>(std::count(keep.begin(), keep.end(), std::uint8_t{1}));
}

std::vector<std::uint8_t> MaskSpec::line_flags() const {
  const std::size_t lines = line_count();
  std::vector<std::uint8_t> flags(lines, 1);
  for (std::size_t i = 0; i < keep.size(); ++i)
    if (!keep[i]) flags[i % lines] = 0;
  return flags;
}

std::size_t MaskSpec::kept_lines() const {
  const auto flags = line_flags();
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), std::uint8_t{1}));
}

bool MaskSpec::is_acs(std::size_t line) const {
  if (kind != MaskKind::kspace_line) return false;
  const auto acs = acs_line_indices(line_count(), acs_lines);
  return std::find(acs.begin(), acs.end(), line) != acs.end();
}

Vec MaskSpec::as_vec() const {
  Vec v(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) v[static_cast<Eigen::Index>(i)] = keep[i];
  return v;
}

std::size_t line_budget(std::size_t lines, double acceleration) {
  if (!(acceleration >= 1.0)) throw std::invalid_argument("acceleration factor must be >= 1");
  return static_cast<std::size_t>(std::lround(static_cast<double>(lines) / acceleration));
}

std::vector<std::size_t> acs_line_indices(std::size_t lines, std::size_t acs) {
  if (acs > lines) throw std::invalid_argument("ACS lines exceed the number of phase-encode lines");
  std::vector<std::size_t> out(acs);
  const std::size_t first = lines / 2 - acs / 2;
  for (std::size_t i = 0; i < acs; ++i) out[i] = first + i;
  return out;
}

MaskSpec make_pixel_mask(const Shape& shape, double erasure, std::uint64_t seed) {
  if (!(erasure >= 0.0 && erasure < 1.0)) throw std::invalid_argument("erasure probability must lie in [0, 1)");
  MaskSpec m;
  m.kind = MaskKind::pixel;
  m.shape = shape;
  m.erasure = erasure;
  m.seed = seed;
  m.keep.resize(shape_size(shape));
  Rng rng(seed);
  for (auto& k : m.keep) k = rng.bernoulli(1.0 - erasure) ? 1 : 0;
  return m;
}

namespace {

void expand_lines(MaskSpec& m, const std::vector<std::uint8_t>& lines) {
  const std::size_t n = shape_size(m.shape);
  m.keep.resize(n);
  for (std::size_t i = 0; i < n; ++i) m.keep[i] = lines[i % lines.size()];
}

}  // namespace

MaskSpec kspace_mask_from_lines(const Shape& shape, const std::vector<std::uint8_t>& lines, double acceleration,
                                std::size_t acs_lines, std::uint64_t seed) {
  if (lines.size() != shape.back()) throw std::invalid_argument("line pattern length does not match shape");
  for (auto j : acs_line_indices(lines.size(), acs_lines))
    if (!lines[j]) throw std::invalid_argument("line pattern drops an ACS line");
  MaskSpec m;
  m.kind = MaskKind::kspace_line;
  m.shape = shape;
  m.acceleration = acceleration;
  m.acs_lines = acs_lines;
  m.seed = seed;
  expand_lines(m, lines);
  return m;
}

MaskSpec make_kspace_mask(const Shape& shape, double acceleration, std::size_t acs_lines, std::uint64_t seed) {
  const std::size_t lines = shape.back();
  shape_size(shape);
  const std::size_t budget = line_budget(lines, acceleration);
  const auto acs = acs_line_indices(lines, acs_lines);
  if (acs_lines > budget)
    throw std::invalid_argument("ACS block (" + std::to_string(acs_lines) + " lines) exceeds the budget of " +
                                std::to_string(budget) + " lines at R=" + std::to_string(acceleration));

  std::vector<std::uint8_t> flags(lines, 0);
  for (auto j : acs) flags[j] = 1;
  std::vector<std::size_t> candidates;
  for (std::size_t j = 0; j < lines; ++j)
    if (!flags[j]) candidates.push_back(j);
  Rng rng(seed);
  for (auto idx : rng.sample_without_replacement(candidates.size(), budget - acs_lines)) flags[candidates[idx]] = 1;
  return kspace_mask_from_lines(shape, flags, acceleration, acs_lines, seed);
}

MaskSpec further_corrupt(const MaskSpec& mask, const CorruptionPolicy& policy, Rng& rng) {
  MaskSpec out = mask;
  out.seed = rng.seed();
  if (mask.kind == MaskKind::pixel) {
    if (policy.acceleration_step != 0.0) throw std::invalid_argument("pixel masks take an erasure policy");
    if (!(policy.delta > 0.0 && policy.delta < 1.0))
      throw std::invalid_argument("further-corruption probability delta must lie in (0, 1)");
    for (auto& k : out.keep)
      if (k && rng.bernoulli(policy.delta)) k = 0;
    out.erasure = 1.0 - (1.0 - mask.erasure) * (1.0 - policy.delta);
    return out;
  }

  if (policy.delta != 0.0) throw std::invalid_argument("k-space masks take an acceleration policy");
  if (!(policy.acceleration_step > 0.0)) throw std::invalid_argument("acceleration step must be positive");
  const std::size_t lines = mask.line_count();
  const double target_r = mask.acceleration + policy.acceleration_step;
  const std::size_t target = line_budget(lines, target_r);
  if (target < mask.acs_lines)
    throw std::invalid_argument("target line budget " + std::to_string(target) + " is below the ACS floor");

  auto flags = mask.line_flags();
  std::vector<std::size_t> removable;
  for (std::size_t j = 0; j < lines; ++j)
    if (flags[j] && !mask.is_acs(j)) removable.push_back(j);
  const std::size_t kept = mask.kept_lines();
  const std::size_t drop = kept > target ? kept - target : 0;
  for (auto idx : rng.sample_without_replacement(removable.size(), drop)) flags[removable[idx]] = 0;
  out.acceleration = target_r;
  expand_lines(out, flags);
  return out;
}

MaskSpec further_corrupt(const MaskSpec& mask, const CorruptionPolicy& policy, std::uint64_t seed) {
  Rng rng(seed);
  return further_corrupt(mask, policy, rng);
}

}  // namespace ambient
