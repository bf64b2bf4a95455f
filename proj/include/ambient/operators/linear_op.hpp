// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>

#include "ambient/numerics/kv_file.hpp"
#include "ambient/operators/coils.hpp"
#include "ambient/operators/mask.hpp"
#include "ambient/operators/signal_space.hpp"

namespace ambient {

enum class OpKind { identity, inpaint, gaussian_cs, downsample, mri_adjoint_aggregate, mri_forward, composite };

const char* to_string(OpKind kind);

/// Immutable linear map between flat complex vectors with known shapes.
class LinearOp {
 public:
  LinearOp(Shape input_shape, Shape output_shape);
  virtual ~LinearOp() = default;

  virtual OpKind kind() const = 0;
  /// True when the matrix is real, i.e. real inputs give real outputs.
  virtual bool real_matrix() const = 0;

  virtual CVec apply(const CVec& x) const = 0;
  virtual CVec adjoint(const CVec& y) const = 0;

  /// Parameters for the key-value sidecar.
  virtual KeyValues describe() const;

  const Shape& input_shape() const { return input_shape_; }
  const Shape& output_shape() const { return output_shape_; }
  std::size_t input_size() const { return input_size_; }
  std::size_t output_size() const { return output_size_; }

  /// Field of the output for inputs from `input`.
  Field output_field(Field input) const;

  /// Action on real-channel vectors. The adjoint is taken with respect to
  /// the real inner product, which coincides with the complex adjoint.
  Vec apply_channels(const Vec& x, Field input) const;
  Vec adjoint_channels(const Vec& y, Field input) const;

  Tensor apply(const Tensor& x) const;
  Tensor adjoint(const Tensor& y) const;

 protected:
  void check_input(const CVec& x) const;
  void check_output(const CVec& y) const;

 private:
  Shape input_shape_;
  Shape output_shape_;
  std::size_t input_size_;
  std::size_t output_size_;
};

using LinearOpPtr = std::shared_ptr<const LinearOp>;

class IdentityOp final : public LinearOp {
 public:
  explicit IdentityOp(Shape shape) : LinearOp(shape, shape) {}
  OpKind kind() const override { return OpKind::identity; }
  bool real_matrix() const override { return true; }
  CVec apply(const CVec& x) const override;
  CVec adjoint(const CVec& y) const override;
};

/// Diagonal 0/1 erasure.
class InpaintOp final : public LinearOp {
 public:
  explicit InpaintOp(MaskSpec mask);
  OpKind kind() const override { return OpKind::inpaint; }
  bool real_matrix() const override { return true; }
  CVec apply(const CVec& x) const override;
  CVec adjoint(const CVec& y) const override { return apply(y); }
  KeyValues describe() const override;
  const MaskSpec& mask() const { return mask_; }

 private:
  MaskSpec mask_;
  Vec diag_;
};

/// m x n matrix with i.i.d. N(0, 1/m) entries.
class GaussianCsOp final : public LinearOp {
 public:
  GaussianCsOp(Shape input_shape, std::size_t measurements, std::uint64_t seed);
  OpKind kind() const override { return OpKind::gaussian_cs; }
  bool real_matrix() const override { return true; }
  CVec apply(const CVec& x) const override;
  CVec adjoint(const CVec& y) const override;
  KeyValues describe() const override;
  const Mat& matrix() const { return matrix_; }

 private:
  std::uint64_t seed_;
  Mat matrix_;
};

/// Block averaging by `factor` over the last axis (1-D) or the last two axes.
class DownsampleOp final : public LinearOp {
 public:
  DownsampleOp(Shape input_shape, std::size_t factor);
  OpKind kind() const override { return OpKind::downsample; }
  bool real_matrix() const override { return true; }
  CVec apply(const CVec& x) const override;
  CVec adjoint(const CVec& y) const override;
  KeyValues describe() const override;
  std::size_t factor() const { return factor_; }

 private:
  std::size_t factor_;
  std::size_t batch_ = 1, rows_ = 1, cols_ = 1;
  bool two_d_ = false;
};

/// sum_i S_i^H F^-1 P F S_i with a centered unitary FFT: the coil-combined
/// adjoint reconstruction of subsampled multi-coil k-space.
class MriAggregateOp final : public LinearOp {
 public:
  MriAggregateOp(MaskSpec mask, CoilMaps coils);
  OpKind kind() const override { return OpKind::mri_adjoint_aggregate; }
  bool real_matrix() const override { return false; }
  CVec apply(const CVec& x) const override;
  CVec adjoint(const CVec& y) const override { return apply(y); }
  KeyValues describe() const override;
  const MaskSpec& mask() const { return mask_; }
  const CoilMaps& coils() const { return coils_; }

 private:
  MaskSpec mask_;
  CoilMaps coils_;
};

/// x -> (P F S_i x)_i, output shape [coils, ...image shape].
class MriForwardOp final : public LinearOp {
 public:
  MriForwardOp(MaskSpec mask, CoilMaps coils);
  OpKind kind() const override { return OpKind::mri_forward; }
  bool real_matrix() const override { return false; }
  CVec apply(const CVec& x) const override;
  CVec adjoint(const CVec& y) const override;
  KeyValues describe() const override;
  const MaskSpec& mask() const { return mask_; }
  const CoilMaps& coils() const { return coils_; }

 private:
  MaskSpec mask_;
  CoilMaps coils_;
};

/// outer ∘ inner.
class CompositeOp final : public LinearOp {
 public:
  CompositeOp(LinearOpPtr outer, LinearOpPtr inner);
  OpKind kind() const override { return OpKind::composite; }
  bool real_matrix() const override { return outer_->real_matrix() && inner_->real_matrix(); }
  CVec apply(const CVec& x) const override { return outer_->apply(inner_->apply(x)); }
  CVec adjoint(const CVec& y) const override { return inner_->adjoint(outer_->adjoint(y)); }

 private:
  LinearOpPtr outer_;
  LinearOpPtr inner_;
};

LinearOpPtr identity_operator(const Shape& shape);
LinearOpPtr inpaint_operator(const MaskSpec& mask);
LinearOpPtr gaussian_cs_operator(std::size_t n, std::size_t m, std::uint64_t seed);
LinearOpPtr gaussian_cs_operator(const Shape& input_shape, std::size_t m, std::uint64_t seed);
LinearOpPtr downsample_operator(const Shape& shape, std::size_t factor);
LinearOpPtr mri_operator(const MaskSpec& mask, const CoilMaps& coils);
LinearOpPtr mri_forward_operator(const MaskSpec& mask, const CoilMaps& coils);
LinearOpPtr compose(LinearOpPtr outer, LinearOpPtr inner);

/// Explicit matrix of the operator in real-channel coordinates
/// (output channels x input channels).
Mat channel_matrix(const LinearOp& op, Field input);
/// Explicit complex matrix (output_size x input_size).
CMat dense_matrix(const LinearOp& op);

/// Max over `trials` random complex pairs (x, y) of
/// |<Ax, y> - <x, A^H y>| / (||Ax|| ||y||).
double adjoint_check(const LinearOp& op, std::size_t trials, std::uint64_t seed);

}  // namespace ambient
