// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "ambient/baselines/fista.hpp"
#include "ambient/diffusion/schedule.hpp"
#include "ambient/models/gaussian_mixture.hpp"
#include "ambient/numerics/kv_file.hpp"
#include "ambient/samplers/samplers.hpp"

namespace ambient {

enum class Task { cs, superres, inpaint, mri };
enum class Method { uncond, dps, adps, aos, fista };

const char* to_string(Task task);
const char* to_string(Method method);
Task parse_task(const std::string& text);
Method parse_method(const std::string& text);

/// Random Gaussian-mixture prior for the toy tasks: `components` means with
/// N(0, scale^2) entries, shared isotropic variance, uniform weights.
struct PriorSpec {
  std::size_t components = 4;
  double scale = 1.0;
  double variance = 0.05;
  std::uint64_t seed = 1;

  GaussianMixturePrior build(std::size_t dim) const;
};

/// One reconstruction experiment. Keys of the flat config file:
///   task, shape, m, factor, p, R, acs_lines, coils, coil_smoothness,
///   noise_sigma, model, method, train_p, train_R, prior_components,
///   prior_scale, prior_variance, prior_seed, dataset, test_count, seed, out,
///   data_range, axis, values, plus the sampler, schedule and FISTA keys.
struct ExperimentConfig {
  Task task = Task::cs;
  Shape shape{8};
  std::size_t m = 4;
  std::size_t factor = 2;
  double erasure = 0.5;
  double acceleration = 4.0;
  std::size_t acs_lines = 2;
  std::size_t coils = 2;
  double coil_smoothness = 0.6;
  double noise_sigma = 0.0;
  /// "analytic:gm", "analytic:gm_ambient" or a checkpoint stem.
  std::string model = "analytic:gm";
  Method method = Method::dps;
  /// A_train for A-DPS / A-OS: pixel erasure for the toy tasks, acceleration
  /// for MRI (0 means R + 1).
  double train_erasure = 0.5;
  double train_acceleration = 0.0;
  PriorSpec prior;
  std::string dataset;
  std::size_t test_count = 16;
  std::uint64_t seed = 0;
  std::string out = "out";
  /// Peak value for PSNR/SSIM; 0 uses max |x0| per sample.
  double data_range = 0.0;
  SamplerConfig sampler;
  NoiseSchedule schedule;
  FistaConfig fista;
  /// Sweep axis (m, factor, p, R or NFE) and its values.
  std::string axis;
  std::vector<double> values;

  bool analytic_model() const { return model.rfind("analytic:", 0) == 0; }
  Field field() const { return task == Task::mri ? Field::complex : Field::real; }

  /// Checks ranges and that referenced files exist.
  void validate() const;
  KeyValues to_kv() const;
  static ExperimentConfig from_kv(const KeyValues& kv);
  /// Hash of the canonical config without the output directory.
  std::string hash() const;
  /// Copy with the sweep parameter `axis` set to `value`.
  ExperimentConfig at(const std::string& axis, double value) const;
};

/// Reads a config file and applies "key=value" overrides in order.
KeyValues load_config(const std::string& path, const std::vector<std::string>& overrides);

}  // namespace ambient
