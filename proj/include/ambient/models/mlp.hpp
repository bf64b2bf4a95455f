// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "ambient/models/autodiff.hpp"
#include "ambient/numerics/rng.hpp"
#include "ambient/numerics/tensor.hpp"

namespace ambient {

/// Network input = [signal channels * input_scale(sigma), mask channels, sigma_feature(sigma)].
struct MlpLayout {
  std::size_t signal_channels = 0;
  std::size_t mask_channels = 0;
  bool sigma_embedding = true;

  std::size_t input_dim() const { return signal_channels + mask_channels + (sigma_embedding ? 1 : 0); }
  std::size_t output_dim() const { return signal_channels; }
};

enum class Activation { tanh };

double input_scale(double sigma);
double sigma_feature(double sigma);

/// Fully connected network: tanh hidden layers, linear output layer.
struct MlpParams {
  MlpLayout layout;
  std::vector<std::size_t> widths;  // input_dim, hidden..., output_dim
  std::vector<Mat> weights;         // weights[l] is widths[l+1] x widths[l]
  std::vector<Vec> biases;
  Activation activation = Activation::tanh;

  std::size_t layers() const { return weights.size(); }
  std::size_t parameter_count() const;
  /// Throws std::invalid_argument on inconsistent shapes or non-finite values.
  void validate() const;

  /// Scaled-normal weights (variance 1/fan_in), zero biases.
  static MlpParams init(const MlpLayout& layout, const std::vector<std::size_t>& hidden, Rng& rng);
};

/// Packs a batch (one sample per column) in the network input layout.
Mat mlp_input(const MlpLayout& layout, const Mat& signals, const Mat& masks, const Vec& sigmas);
Vec mlp_input(const MlpLayout& layout, const Vec& signal, const Vec& mask, double sigma);

/// Plain forward pass on packed inputs.
Mat mlp_forward(const MlpParams& params, const Mat& input);

/// Denoiser output for a single signal.
Vec mlp_denoise(const MlpParams& params, const Vec& y, const Vec& mask, double sigma);
Tensor mlp_denoise(const MlpParams& params, const Tensor& y, const Tensor& mask, double sigma);

struct MlpVars {
  std::vector<ad::Var> weights;
  std::vector<ad::Var> biases;
};

MlpVars record_params(ad::Tape& tape, const MlpParams& params);
ad::Var mlp_forward(ad::Tape& tape, const MlpParams& params, const MlpVars& vars, ad::Var input);

/// Builds the scalar loss from the network output.
using LossClosure = std::function<ad::Var(ad::Tape& tape, ad::Var output)>;

struct MlpGradients {
  double loss = 0.0;
  std::vector<Mat> weights;
  std::vector<Vec> biases;
  Mat input;  // gradient w.r.t. the packed input
};

MlpGradients grad_wrt_params(const MlpParams& params, const Mat& input, const LossClosure& loss);
Mat grad_wrt_input(const MlpParams& params, const Mat& input, const LossClosure& loss);

}  // namespace ambient
