// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/models/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ambient/operators/signal_space.hpp"

namespace ambient {

double input_scale(double sigma) { return 1.0 / std::sqrt(1.0 + sigma * sigma); }

double sigma_feature(double sigma) { return 0.25 * std::log(std::max(sigma, 1e-12)); }

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
  return n;
}

void MlpParams::validate() const {
  if (widths.size() < 2) throw std::invalid_argument("mlp needs at least input and output widths");
  if (weights.size() != widths.size() - 1 || biases.size() != weights.size())
    throw std::invalid_argument("mlp layer count does not match widths");
  if (widths.front() != layout.input_dim())
    throw std::invalid_argument("mlp input width " + std::to_string(widths.front()) + " does not match layout " +
                                std::to_string(layout.input_dim()));
  if (widths.back() != layout.output_dim()) throw std::invalid_argument("mlp output width does not match layout");
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (static_cast<std::size_t>(weights[l].rows()) != widths[l + 1] ||
        static_cast<std::size_t>(weights[l].cols()) != widths[l] ||
        static_cast<std::size_t>(biases[l].size()) != widths[l + 1])
      throw std::invalid_argument("mlp layer " + std::to_string(l) + " has the wrong shape");
    if (!weights[l].allFinite() || !biases[l].allFinite())
      throw std::invalid_argument("mlp layer " + std::to_string(l) + " has non-finite parameters");
  }
}

MlpParams MlpParams::init(const MlpLayout& layout, const std::vector<std::size_t>& hidden, Rng& rng) {
  MlpParams p;
  p.layout = layout;
  p.widths.push_back(layout.input_dim());
  for (auto w : hidden) p.widths.push_back(w);
  p.widths.push_back(layout.output_dim());
  for (std::size_t l = 0; l + 1 < p.widths.size(); ++l) {
    const auto rows = static_cast<Eigen::Index>(p.widths[l + 1]);
    const auto cols = static_cast<Eigen::Index>(p.widths[l]);
    const double scale = 1.0 / std::sqrt(static_cast<double>(cols));
    Mat w(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) w(i, j) = scale * rng.normal();
    p.weights.push_back(std::move(w));
    p.biases.push_back(Vec::Zero(rows));
  }
  p.validate();
  return p;
}

Mat mlp_input(const MlpLayout& layout, const Mat& signals, const Mat& masks, const Vec& sigmas) {
  const auto batch = signals.cols();
  if (static_cast<std::size_t>(signals.rows()) != layout.signal_channels)
    throw std::invalid_argument("signal has " + std::to_string(signals.rows()) + " channels, layout expects " +
                                std::to_string(layout.signal_channels));
  if (layout.mask_channels > 0 &&
      (static_cast<std::size_t>(masks.rows()) != layout.mask_channels || masks.cols() != batch))
    throw std::invalid_argument("mask channel has the wrong shape for the layout");
  if (sigmas.size() != batch) throw std::invalid_argument("one sigma per batch column required");
  Mat in(static_cast<Eigen::Index>(layout.input_dim()), batch);
  const auto sc = static_cast<Eigen::Index>(layout.signal_channels);
  const auto mc = static_cast<Eigen::Index>(layout.mask_channels);
  for (Eigen::Index j = 0; j < batch; ++j) {
    in.col(j).head(sc) = input_scale(sigmas[j]) * signals.col(j);
    if (mc > 0) in.col(j).segment(sc, mc) = masks.col(j);
    if (layout.sigma_embedding) in(sc + mc, j) = sigma_feature(sigmas[j]);
  }
  return in;
}

Vec mlp_input(const MlpLayout& layout, const Vec& signal, const Vec& mask, double sigma) {
  Vec s(1);
  s[0] = sigma;
  return mlp_input(layout, Mat(signal), Mat(mask), s).col(0);
}

Mat mlp_forward(const MlpParams& params, const Mat& input) {
  if (static_cast<std::size_t>(input.rows()) != params.widths.front())
    throw std::invalid_argument("mlp input has " + std::to_string(input.rows()) + " rows, expected " +
                                std::to_string(params.widths.front()));
  Mat h = input;
  for (std::size_t l = 0; l < params.layers(); ++l) {
    Mat z = params.weights[l] * h;
    z.colwise() += params.biases[l];
    if (l + 1 < params.layers())
      h = z.array().tanh().matrix();
    else
      h = std::move(z);
  }
  return h;
}

Vec mlp_denoise(const MlpParams& params, const Vec& y, const Vec& mask, double sigma) {
  if (static_cast<std::size_t>(y.size()) != params.layout.signal_channels)
    throw std::invalid_argument("mlp_denoise: signal length " + std::to_string(y.size()) + " does not match layout " +
                                std::to_string(params.layout.signal_channels));
  if (static_cast<std::size_t>(mask.size()) != params.layout.mask_channels)
    throw std::invalid_argument("mlp_denoise: mask length " + std::to_string(mask.size()) + " does not match layout " +
                                std::to_string(params.layout.mask_channels));
  return mlp_forward(params, mlp_input(params.layout, y, mask, sigma)).col(0);
}

Tensor mlp_denoise(const MlpParams& params, const Tensor& y, const Tensor& mask, double sigma) {
  if (y.is_complex()) {
    const Vec out = mlp_denoise(params, to_channels(y.to_cvec(), Field::complex), mask.to_vec(), sigma);
    return Tensor::from(y.shape(), from_channels(out, Field::complex));
  }
  return Tensor::from(y.shape(), mlp_denoise(params, y.to_vec(), mask.to_vec(), sigma));
}

MlpVars record_params(ad::Tape& tape, const MlpParams& params) {
  MlpVars v;
  for (std::size_t l = 0; l < params.layers(); ++l) {
    v.weights.push_back(tape.leaf(params.weights[l]));
    v.biases.push_back(tape.leaf(Mat(params.biases[l])));
  }
  return v;
}

ad::Var mlp_forward(ad::Tape& tape, const MlpParams& params, const MlpVars& vars, ad::Var input) {
  ad::Var h = input;
  for (std::size_t l = 0; l < params.layers(); ++l) {
    h = tape.add_bias(tape.matmul(vars.weights[l], h), vars.biases[l]);
    if (l + 1 < params.layers()) h = tape.tanh(h);
  }
  return h;
}

MlpGradients grad_wrt_params(const MlpParams& params, const Mat& input, const LossClosure& loss) {
  ad::Tape tape;
  const MlpVars vars = record_params(tape, params);
  const ad::Var in = tape.leaf(input);
  const ad::Var out = mlp_forward(tape, params, vars, in);
  const ad::Var l = loss(tape, out);
  tape.backward(l);
  MlpGradients g;
  g.loss = l.value()(0, 0);
  for (std::size_t i = 0; i < params.layers(); ++i) {
    g.weights.push_back(tape.grad(vars.weights[i]));
    g.biases.push_back(tape.grad(vars.biases[i]).col(0));
  }
  g.input = tape.grad(in);
  return g;
}

Mat grad_wrt_input(const MlpParams& params, const Mat& input, const LossClosure& loss) {
  ad::Tape tape;
  MlpVars vars;
  for (std::size_t l = 0; l < params.layers(); ++l) {
    vars.weights.push_back(tape.constant(params.weights[l]));
    vars.biases.push_back(tape.constant(Mat(params.biases[l])));
  }
  const ad::Var in = tape.leaf(input);
  const ad::Var l = loss(tape, mlp_forward(tape, params, vars, in));
  tape.backward(l);
  return tape.grad(in);
}

}  // namespace ambient
