// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/samplers/samplers.hpp"

#include <cmath>

#include "ambient/operators/signal_space.hpp"

namespace ambient {

void SamplerConfig::validate() const {
  if (steps < 2) throw std::invalid_argument("sampler needs at least 2 steps");
  if (guidance == GuidanceMode::constant) {
    if (!std::isfinite(gamma) || gamma < 0.0) throw std::invalid_argument("guidance weight must be finite and >= 0");
    if (!allow_any_gamma && (gamma < 0.1 || gamma > 10.0))
      throw std::invalid_argument("constant guidance weight " + format_double(gamma) +
                                  " is outside [0.1, 10]; set allow_any_gamma to override");
  }
}

void SamplerConfig::set_gamma(const std::string& spec) {
  if (spec == "normalized") {
    guidance = GuidanceMode::normalized;
    return;
  }
  if (spec.rfind("const:", 0) != 0) throw std::invalid_argument("gamma must be const:<v> or normalized, got '" + spec + "'");
  KeyValues kv;
  kv.set("gamma", spec.substr(6));
  guidance = GuidanceMode::constant;
  gamma = kv.get_double("gamma");
}

std::string SamplerConfig::gamma_spec() const {
  return guidance == GuidanceMode::normalized ? "normalized" : "const:" + format_double(gamma);
}

void SamplerConfig::write_config(KeyValues& kv) const {
  kv.set("steps", steps);
  kv.set("gamma", gamma_spec());
  kv.set("allow_any_gamma", allow_any_gamma);
  kv.set("sampler_seed", seed);
  kv.set("stochastic", stochastic);
}

SamplerConfig SamplerConfig::from_config(const KeyValues& kv) {
  SamplerConfig c;
  c.steps = kv.get_u64_or("steps", c.steps);
  if (kv.contains("gamma")) c.set_gamma(kv.get("gamma"));
  c.allow_any_gamma = kv.get_bool_or("allow_any_gamma", c.allow_any_gamma);
  c.seed = kv.get_u64_or("sampler_seed", c.seed);
  c.stochastic = kv.get_bool_or("stochastic", c.stochastic);
  c.validate();
  return c;
}

void InverseProblem::validate() const {
  if (!op) throw std::invalid_argument("inverse problem has no operator");
  if (static_cast<std::size_t>(y.size()) != op->output_size())
    throw std::invalid_argument("measurement has " + std::to_string(y.size()) + " entries, operator output has " +
                                std::to_string(op->output_size()));
}

SamplerDiverged::SamplerDiverged(std::size_t step, double t)
    : std::runtime_error("sampler state became non-finite at step " + std::to_string(step) + " (t = " +
                         format_double(t) + ")"),
      step_(step) {}

namespace {

Vec run(const Denoiser& denoiser, const InverseProblem* problem, const Corruption* a_train,
        const NoiseSchedule& schedule, const SamplerConfig& config, const StepTrace& trace) {
  config.validate();
  schedule.validate();
  const Field field = denoiser.space().field;
  if (a_train) {
    if (!a_train->op) throw std::invalid_argument("A_train has no operator");
    if (a_train->op->input_shape() != denoiser.space().shape || a_train->op->output_shape() != denoiser.space().shape)
      throw std::invalid_argument("A_train must map the signal space to itself");
    if (denoiser.conditioning() == Conditioning::mask_concat &&
        static_cast<std::size_t>(a_train->mask.size()) != denoiser.space().entries())
      throw std::invalid_argument("A_train mask does not fit the denoiser's mask channel");
  }
  Vec y_ch;
  if (problem) {
    problem->validate();
    if (problem->op->input_shape() != denoiser.space().shape)
      throw std::invalid_argument("inverse problem operator does not act on the signal space");
    y_ch = to_channels(problem->y, problem->op->output_field(field));
  }

  Rng rng(config.seed);
  const std::vector<double> grid = schedule.time_grid(config.steps);
  const std::size_t channels = denoiser.space().channels();
  Vec x = schedule.sigma(grid.front()) * rng.normal_vec(channels);

  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double t = grid[i];
    const double dt = grid[i + 1] - t;
    const double sigma = schedule.sigma(t);
    const Vec input = a_train ? a_train->op->apply_channels(x, field) : x;
    const Vec x0 = denoiser.denoise(input, a_train, sigma);
    Vec drift = (x0 - x) / (sigma * sigma);
    if (problem) {
      const Vec residual = y_ch - problem->op->apply_channels(x0, field);
      const double gamma =
          config.guidance == GuidanceMode::normalized ? 1.0 / std::max(residual.norm(), 1e-300) : config.gamma;
      if (gamma != 0.0) {
        Vec grad = denoiser.input_vjp(input, a_train, sigma, problem->op->adjoint_channels(residual, field));
        if (a_train) grad = a_train->op->adjoint_channels(grad, field);
        drift += gamma * grad;
      }
    }
    const double g2 = schedule.g(t) * schedule.g(t);
    if (config.stochastic) {
      x = x - g2 * dt * drift + std::sqrt(g2 * -dt) * rng.normal_vec(channels);
    } else {
      x = x - 0.5 * g2 * dt * drift;
    }
    if (!x.allFinite()) throw SamplerDiverged(i, grid[i + 1]);
    if (trace) trace(i, grid[i + 1], x);
  }
  return x;
}

}  // namespace

Vec sample_uncond(const Denoiser& denoiser, const NoiseSchedule& schedule, const SamplerConfig& config,
                  const Corruption* a_train, const StepTrace& trace) {
  return run(denoiser, nullptr, a_train, schedule, config, trace);
}

Vec dps_sample(const Denoiser& denoiser, const InverseProblem& problem, const NoiseSchedule& schedule,
               const SamplerConfig& config, const StepTrace& trace) {
  return run(denoiser, &problem, nullptr, schedule, config, trace);
}

Vec adps_sample(const Denoiser& denoiser, const InverseProblem& problem, const Corruption& a_train,
                const NoiseSchedule& schedule, const SamplerConfig& config, const StepTrace& trace) {
  return run(denoiser, &problem, &a_train, schedule, config, trace);
}

Vec aos_predict(const Denoiser& denoiser, const Vec& y, const Corruption& corruption, double sigma) {
  return denoiser.denoise(y, &corruption, sigma);
}

}  // namespace ambient
