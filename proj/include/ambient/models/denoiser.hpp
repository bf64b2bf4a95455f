// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>

#include "ambient/models/gaussian_mixture.hpp"
#include "ambient/models/mlp.hpp"
#include "ambient/operators/linear_op.hpp"
#include "ambient/operators/signal_space.hpp"

namespace ambient {

enum class DenoiserKind { analytic_gm, analytic_gm_ambient, mlp };
enum class Conditioning { none, mask_concat };

const char* to_string(DenoiserKind kind);

/// What an ambient denoiser is told about its input: the operator that
/// produced it and the 0/1 mask channel (one value per signal entry).
struct Corruption {
  LinearOpPtr op;
  Vec mask;

  static Corruption identity(const Shape& shape);
  static Corruption inpaint(const MaskSpec& mask);
  static Corruption mri(const MaskSpec& mask, const CoilMaps& coils);
};

/// x0-prediction E[x0 | input] on real-channel vectors. Clean denoisers take
/// x_t; ambient denoisers take A x_t together with the corruption.
class Denoiser {
 public:
  virtual ~Denoiser() = default;

  virtual DenoiserKind kind() const = 0;
  virtual Conditioning conditioning() const = 0;
  const SignalSpace& space() const { return space_; }

  virtual Vec denoise(const Vec& input, const Corruption* corruption, double sigma) const = 0;
  /// (d denoise / d input)^T cotangent.
  virtual Vec input_vjp(const Vec& input, const Corruption* corruption, double sigma, const Vec& cotangent) const = 0;

 protected:
  explicit Denoiser(SignalSpace space) : space_(std::move(space)) {}
  void check_input(const Vec& input) const;

 private:
  SignalSpace space_;
};

using DenoiserPtr = std::shared_ptr<const Denoiser>;

/// Closed-form E[x0 | x_t] under a Gaussian mixture. Ignores any corruption.
class GmDenoiser final : public Denoiser {
 public:
  GmDenoiser(GaussianMixturePrior prior, SignalSpace space);
  DenoiserKind kind() const override { return DenoiserKind::analytic_gm; }
  Conditioning conditioning() const override { return Conditioning::none; }
  Vec denoise(const Vec& input, const Corruption* corruption, double sigma) const override;
  Vec input_vjp(const Vec& input, const Corruption* corruption, double sigma, const Vec& cotangent) const override;
  const GaussianMixturePrior& prior() const { return prior_; }

 private:
  GaussianMixturePrior prior_;
};

/// Closed-form E[x0 | A (x0 + sigma eta), A] under a Gaussian mixture. The
/// conditioner for `bound` is precomputed; any other operator is conditioned
/// on the fly.
class GmAmbientDenoiser final : public Denoiser {
 public:
  GmAmbientDenoiser(GaussianMixturePrior prior, SignalSpace space, const Corruption& bound);
  DenoiserKind kind() const override { return DenoiserKind::analytic_gm_ambient; }
  Conditioning conditioning() const override { return Conditioning::mask_concat; }
  Vec denoise(const Vec& input, const Corruption* corruption, double sigma) const override;
  Vec input_vjp(const Vec& input, const Corruption* corruption, double sigma, const Vec& cotangent) const override;

 private:
  GmAmbientConditioner conditioner_for(const Corruption* corruption) const;

  GaussianMixturePrior prior_;
  LinearOpPtr bound_op_;
  GmAmbientConditioner bound_;
};

/// Trained network. Mask-conditioned when its layout has mask channels.
class MlpDenoiser final : public Denoiser {
 public:
  MlpDenoiser(MlpParams params, SignalSpace space);
  DenoiserKind kind() const override { return DenoiserKind::mlp; }
  Conditioning conditioning() const override {
    return params_.layout.mask_channels > 0 ? Conditioning::mask_concat : Conditioning::none;
  }
  Vec denoise(const Vec& input, const Corruption* corruption, double sigma) const override;
  Vec input_vjp(const Vec& input, const Corruption* corruption, double sigma, const Vec& cotangent) const override;
  const MlpParams& params() const { return params_; }

 private:
  Vec mask_channel(const Corruption* corruption) const;

  MlpParams params_;
};

}  // namespace ambient
