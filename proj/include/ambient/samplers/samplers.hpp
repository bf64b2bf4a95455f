// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "ambient/diffusion/schedule.hpp"
#include "ambient/models/denoiser.hpp"
#include "ambient/numerics/kv_file.hpp"

namespace ambient {

enum class GuidanceMode { constant, normalized };

struct SamplerConfig {
  std::size_t steps = 100;
  GuidanceMode guidance = GuidanceMode::constant;
  /// Guidance weight in constant mode. Values outside [0.1, 10] need allow_any_gamma.
  double gamma = 1.0;
  bool allow_any_gamma = false;
  std::uint64_t seed = 0;
  /// Euler-Maruyama on the reverse SDE when true, Euler on the probability-flow ODE otherwise.
  bool stochastic = true;

  void validate() const;
  /// "const:<v>" or "normalized".
  void set_gamma(const std::string& spec);
  std::string gamma_spec() const;
  void write_config(KeyValues& kv) const;
  static SamplerConfig from_config(const KeyValues& kv);
};

/// y_inf = A_inf x (+ noise); y in the operator's output space.
struct InverseProblem {
  LinearOpPtr op;
  CVec y;

  void validate() const;
};

class SamplerDiverged : public std::runtime_error {
 public:
  SamplerDiverged(std::size_t step, double t);
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// Called after every step with the step index, the new time and state.
using StepTrace = std::function<void(std::size_t step, double t, const Vec& x)>;

/// Unconditional reverse-time sampling. With `a_train` the drift uses the
/// ambient estimate E[x0 | A_train x_t, A_train].
Vec sample_uncond(const Denoiser& denoiser, const NoiseSchedule& schedule, const SamplerConfig& config,
                  const Corruption* a_train = nullptr, const StepTrace& trace = {});

/// Diffusion posterior sampling: the score is augmented with
/// gamma_t J^T A^H (y - A x0_hat(x_t)).
Vec dps_sample(const Denoiser& denoiser, const InverseProblem& problem, const NoiseSchedule& schedule,
               const SamplerConfig& config, const StepTrace& trace = {});

/// DPS with an ambient denoiser: x0_hat = D(A_train x_t, A_train) for one
/// frozen A_train; the likelihood gradient is A_train^T J^T A^H r.
Vec adps_sample(const Denoiser& denoiser, const InverseProblem& problem, const Corruption& a_train,
                const NoiseSchedule& schedule, const SamplerConfig& config, const StepTrace& trace = {});

/// One forward pass of an ambient denoiser at a small noise level.
Vec aos_predict(const Denoiser& denoiser, const Vec& y, const Corruption& corruption, double sigma);

}  // namespace ambient
