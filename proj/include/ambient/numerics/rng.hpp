// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "ambient/numerics/tensor.hpp"

namespace ambient {

/// Seeded random stream.
///
/// Algorithm id "mt19937_64/u53/polar": std::mt19937_64 (bit-exact across
/// conforming standard libraries), uniforms from the top 53 bits, normals by
/// the Marsaglia polar method. Integer draws use rejection on the raw 64-bit
/// output, so no implementation-defined std distributions are involved.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64/u53/polar";

  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  double normal();
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n);

  Vec normal_vec(std::size_t n);
  /// Complex normal with independent real and imaginary parts, each of variance 1.
  CVec complex_normal_vec(std::size_t n);

  /// k distinct indices drawn uniformly from [0, n), in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

  /// Independent stream derived from this stream's seed and a stream index.
  Rng split(std::uint64_t stream) const { return Rng(derive_seed(seed_, stream)); }

  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ambient
