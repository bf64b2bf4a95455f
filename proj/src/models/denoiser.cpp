// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/models/denoiser.hpp"

#include <stdexcept>
#include <string>

namespace ambient {

const char* to_string(DenoiserKind kind) {
  switch (kind) {
    case DenoiserKind::analytic_gm: return "analytic_gm";
    case DenoiserKind::analytic_gm_ambient: return "analytic_gm_ambient";
    case DenoiserKind::mlp: return "mlp";
  }
  return "?";
}

Corruption Corruption::identity(const Shape& shape) {
  return {identity_operator(shape), Vec::Ones(static_cast<Eigen::Index>(shape_size(shape)))};
}

Corruption Corruption::inpaint(const MaskSpec& mask) { return {inpaint_operator(mask), mask.as_vec()}; }

Corruption Corruption::mri(const MaskSpec& mask, const CoilMaps& coils) {
  return {mri_operator(mask, coils), mask.as_vec()};
}

void Denoiser::check_input(const Vec& input) const {
  if (static_cast<std::size_t>(input.size()) != space_.channels())
    throw std::invalid_argument("denoiser input has " + std::to_string(input.size()) + " channels, expected " +
                                std::to_string(space_.channels()));
}

GmDenoiser::GmDenoiser(GaussianMixturePrior prior, SignalSpace space)
    : Denoiser(std::move(space)), prior_(std::move(prior)) {
  prior_.validate();
  if (prior_.dim() != this->space().channels()) throw std::invalid_argument("prior dimension does not match the signal");
}

Vec GmDenoiser::denoise(const Vec& input, const Corruption*, double sigma) const {
  check_input(input);
  return gm_denoise(prior_, input, sigma);
}

Vec GmDenoiser::input_vjp(const Vec& input, const Corruption*, double sigma, const Vec& cotangent) const {
  check_input(input);
  return gm_denoise_vjp(prior_, input, sigma, cotangent);
}

GmAmbientDenoiser::GmAmbientDenoiser(GaussianMixturePrior prior, SignalSpace space, const Corruption& bound)
    : Denoiser(std::move(space)),
      prior_(std::move(prior)),
      bound_op_(bound.op),
      bound_(prior_, *bound.op, this->space().field) {
  if (prior_.dim() != this->space().channels()) throw std::invalid_argument("prior dimension does not match the signal");
  if (bound.op->output_shape() != bound.op->input_shape())
    throw std::invalid_argument("ambient denoisers need an operator mapping the signal space to itself");
}

GmAmbientConditioner GmAmbientDenoiser::conditioner_for(const Corruption* corruption) const {
  if (!corruption) throw std::invalid_argument("ambient denoiser needs the corruption");
  return GmAmbientConditioner(prior_, *corruption->op, space().field);
}

Vec GmAmbientDenoiser::denoise(const Vec& input, const Corruption* corruption, double sigma) const {
  check_input(input);
  if (!corruption || corruption->op == bound_op_) return bound_.denoise(input, sigma);
  return conditioner_for(corruption).denoise(input, sigma);
}

Vec GmAmbientDenoiser::input_vjp(const Vec& input, const Corruption* corruption, double sigma,
                                 const Vec& cotangent) const {
  check_input(input);
  if (!corruption || corruption->op == bound_op_) return bound_.vjp(input, sigma, cotangent);
  return conditioner_for(corruption).vjp(input, sigma, cotangent);
}

MlpDenoiser::MlpDenoiser(MlpParams params, SignalSpace space) : Denoiser(std::move(space)), params_(std::move(params)) {
  params_.validate();
  if (params_.layout.signal_channels != this->space().channels())
    throw std::invalid_argument("network layout does not match the signal");
  if (params_.layout.mask_channels != 0 && params_.layout.mask_channels != this->space().entries())
    throw std::invalid_argument("network mask channel must have one value per signal entry");
}

Vec MlpDenoiser::mask_channel(const Corruption* corruption) const {
  if (params_.layout.mask_channels == 0) return Vec();
  if (!corruption) throw std::invalid_argument("mask-conditioned network needs the corruption mask");
  if (static_cast<std::size_t>(corruption->mask.size()) != params_.layout.mask_channels)
    throw std::invalid_argument("corruption mask has the wrong length for the network");
  return corruption->mask;
}

Vec MlpDenoiser::denoise(const Vec& input, const Corruption* corruption, double sigma) const {
  check_input(input);
  return mlp_denoise(params_, input, mask_channel(corruption), sigma);
}

Vec MlpDenoiser::input_vjp(const Vec& input, const Corruption* corruption, double sigma, const Vec& cotangent) const {
  check_input(input);
  const Vec packed = mlp_input(params_.layout, input, mask_channel(corruption), sigma);
  const Mat u = cotangent;
  const Mat g = grad_wrt_input(params_, packed, [&u](ad::Tape& tape, ad::Var out) {
    return tape.sum(tape.mul(tape.constant(u), out));
  });
  return input_scale(sigma) * g.col(0).head(static_cast<Eigen::Index>(params_.layout.signal_channels));
}

}  // namespace ambient
