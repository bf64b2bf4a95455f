// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "ambient/models/mlp.hpp"
#include "ambient/mri_sim/acquisition.hpp"
#include "ambient/numerics/kv_file.hpp"
#include "ambient/operators/mask.hpp"
#include "ambient/operators/signal_space.hpp"

namespace ambient {

struct TrainConfig {
  double learning_rate = 1e-2;
  /// The step size decays linearly to learning_rate * final_lr_fraction.
  double final_lr_fraction = 1.0;
  double momentum = 0.9;
  std::size_t batch_size = 64;
  std::size_t iterations = 1000;
  std::uint64_t seed = 0;
  CorruptionPolicy policy;
  /// Storage precision of checkpoints; training always runs in f64.
  DType precision = DType::f64;
  /// Training noise levels: drawn uniformly from the list when non-empty,
  /// otherwise log-uniformly from [sigma_lo, sigma_hi].
  std::vector<double> sigma_levels;
  double sigma_lo = 0.002;
  double sigma_hi = 80.0;
  /// Worker threads for gradient accumulation; 0 reads AMBIENT_THREADS.
  std::size_t threads = 0;

  void validate() const;
  void write_config(KeyValues& kv) const;
  static TrainConfig from_config(const KeyValues& kv);
};

struct TrainResult {
  MlpParams params;
  std::vector<double> loss_trace;
};

class TrainingDiverged : public std::runtime_error {
 public:
  TrainingDiverged(std::size_t iteration, double loss);
  std::size_t iteration() const { return iteration_; }

 private:
  std::size_t iteration_;
};

/// Draws a clean signal in channel layout.
using CleanSampler = std::function<Vec(Rng&)>;

/// A corrupted training example: y0 = A x0 in channel layout and the mask of A.
struct InpaintSample {
  Vec y0;
  MaskSpec mask;
};
using InpaintSampler = std::function<InpaintSample(Rng&)>;

using KspaceSampler = std::function<KspaceData(Rng&)>;

/// min E || h(x0 + sigma eta, sigma) - x0 ||^2.
TrainResult train_clean(const CleanSampler& sampler, const SignalSpace& space, MlpParams init,
                        const TrainConfig& config);

/// min E || A h(A~ (x0 + sigma eta), A~, sigma) - A x0 ||^2 with A~ drawn by
/// extra erasure (config.policy.delta > 0) of each example's mask.
TrainResult train_ambient_inpaint(const InpaintSampler& sampler, const SignalSpace& space, MlpParams init,
                                  const TrainConfig& config);

/// The same objective for multi-coil k-space: A = sum_i S_i^H F^-1 P F S_i,
/// A~ uses the mask further accelerated by config.policy.acceleration_step.
/// The network input is sum_i S_i^H F^-1 P~ z_i + sigma A~ eta.
TrainResult train_ambient_mri(const KspaceSampler& sampler, MlpParams init, const TrainConfig& config);

/// Any denoiser evaluated on the ambient inpainting input: (A~ y, A~, sigma) -> x0 estimate.
using AmbientDenoiseFn = std::function<Vec(const Vec& input, const MaskSpec& corrupted, double sigma)>;

struct ObjectiveEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Monte-Carlo estimate of the ambient inpainting objective for `h`, drawing
/// examples (sigma, A~, eta) with the training sampling path.
ObjectiveEstimate ambient_inpaint_objective(const InpaintSampler& sampler, const SignalSpace& space,
                                            const AmbientDenoiseFn& h, const TrainConfig& config, std::size_t samples,
                                            std::uint64_t seed);

std::size_t worker_threads(std::size_t requested);

}  // namespace ambient
