// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/operators/linear_op.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ambient/numerics/fft.hpp"
#include "ambient/numerics/rng.hpp"

namespace ambient {

const char* to_string(OpKind kind) {
  switch (kind) {
    case OpKind::identity: return "identity";
    case OpKind::inpaint: return "inpaint";
    case OpKind::gaussian_cs: return "gaussian_cs";
    case OpKind::downsample: return "downsample";
    case OpKind::mri_adjoint_aggregate: return "mri_adjoint_aggregate";
    case OpKind::mri_forward: return "mri_forward";
    case OpKind::composite: return "composite";
  }
  return "unknown";
}

LinearOp::LinearOp(Shape input_shape, Shape output_shape)
    : input_shape_(std::move(input_shape)),
      output_shape_(std::move(output_shape)),
      input_size_(shape_size(input_shape_)),
      output_size_(shape_size(output_shape_)) {}

KeyValues LinearOp::describe() const {
  KeyValues kv;
  kv.set("kind", to_string(kind()));
  kv.set("input_shape", shape_string(input_shape_));
  kv.set("output_shape", shape_string(output_shape_));
  return kv;
}

Field LinearOp::output_field(Field input) const {
  return input == Field::complex || !real_matrix() ? Field::complex : Field::real;
}

Vec LinearOp::apply_channels(const Vec& x, Field input) const {
  return to_channels(apply(from_channels(x, input)), output_field(input));
}

Vec LinearOp::adjoint_channels(const Vec& y, Field input) const {
  const CVec back = adjoint(from_channels(y, output_field(input)));
  return to_channels(back, input);
}

Tensor LinearOp::apply(const Tensor& x) const {
  if (x.shape() != input_shape_)
    throw std::invalid_argument("operator input shape " + shape_string(input_shape_) + ", got " +
                                shape_string(x.shape()));
  return Tensor::from(output_shape_, apply(x.to_cvec()));
}

Tensor LinearOp::adjoint(const Tensor& y) const {
  if (y.shape() != output_shape_)
    throw std::invalid_argument("operator output shape " + shape_string(output_shape_) + ", got " +
                                shape_string(y.shape()));
  return Tensor::from(input_shape_, adjoint(y.to_cvec()));
}

void LinearOp::check_input(const CVec& x) const {
  if (static_cast<std::size_t>(x.size()) != input_size_)
    throw std::invalid_argument(std::string(to_string(kind())) + ": input length " + std::to_string(x.size()) +
                                ", expected " + std::to_string(input_size_));
}

void LinearOp::check_output(const CVec& y) const {
  if (static_cast<std::size_t>(y.size()) != output_size_)
    throw std::invalid_argument(std::string(to_string(kind())) + ": output length " + std::to_string(y.size()) +
                                ", expected " + std::to_string(output_size_));
}

// --- identity ---------------------------------------------------------------

CVec IdentityOp::apply(const CVec& x) const {
  check_input(x);
  return x;
}

CVec IdentityOp::adjoint(const CVec& y) const {
  check_output(y);
  return y;
}

// --- inpainting -------------------------------------------------------------

InpaintOp::InpaintOp(MaskSpec mask) : LinearOp(mask.shape, mask.shape), mask_(std::move(mask)), diag_(mask_.as_vec()) {}

CVec InpaintOp::apply(const CVec& x) const {
  check_input(x);
  return x.cwiseProduct(diag_.cast<cplx>());
}

KeyValues InpaintOp::describe() const {
  KeyValues kv = LinearOp::describe();
  kv.set("mask_kind", to_string(mask_.kind));
  kv.set("erasure", mask_.erasure);
  kv.set("acceleration", mask_.acceleration);
  kv.set("acs_lines", mask_.acs_lines);
  kv.set("seed", mask_.seed);
  return kv;
}

// --- Gaussian compressed sensing ---------------------------------------------

GaussianCsOp::GaussianCsOp(Shape input_shape, std::size_t measurements, std::uint64_t seed)
    : LinearOp(input_shape, Shape{measurements == 0 ? throw std::invalid_argument("need m >= 1") : measurements}),
      seed_(seed) {
  const auto m = static_cast<Eigen::Index>(measurements);
  const auto n = static_cast<Eigen::Index>(input_size());
  matrix_.resize(m, n);
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(measurements));
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < n; ++c) matrix_(r, c) = scale * rng.normal();
}

CVec GaussianCsOp::apply(const CVec& x) const {
  check_input(x);
  CVec y(matrix_.rows());
  y.real() = matrix_ * x.real();
  y.imag() = matrix_ * x.imag();
  return y;
}

CVec GaussianCsOp::adjoint(const CVec& y) const {
  check_output(y);
  CVec x(matrix_.cols());
  x.real() = matrix_.transpose() * y.real();
  x.imag() = matrix_.transpose() * y.imag();
  return x;
}

KeyValues GaussianCsOp::describe() const {
  KeyValues kv = LinearOp::describe();
  kv.set("measurements", static_cast<std::size_t>(matrix_.rows()));
  kv.set("seed", seed_);
  return kv;
}

// --- downsampling -------------------------------------------------------------

namespace {

Shape pooled_shape(const Shape& in, std::size_t factor) {
  if (factor == 0) throw std::invalid_argument("downsampling factor must be positive");
  Shape out = in;
  const std::size_t axes = in.size() == 1 ? 1 : 2;
  for (std::size_t a = in.size() - axes; a < in.size(); ++a) {
    if (in[a] % factor != 0)
      throw std::invalid_argument("dims " + shape_string(in) + " not divisible by factor " + std::to_string(factor));
    out[a] = in[a] / factor;
  }
  return out;
}

}  // namespace

DownsampleOp::DownsampleOp(Shape input_shape, std::size_t factor)
    : LinearOp(input_shape, pooled_shape(input_shape, factor)), factor_(factor) {
  const Shape& s = this->input_shape();
  two_d_ = s.size() >= 2;
  cols_ = s.back();
  rows_ = two_d_ ? s[s.size() - 2] : 1;
  batch_ = input_size() / (rows_ * cols_);
}

CVec DownsampleOp::apply(const CVec& x) const {
  check_input(x);
  const std::size_t fr = two_d_ ? factor_ : 1;
  const std::size_t orow = rows_ / fr, ocol = cols_ / factor_;
  const double w = 1.0 / static_cast<double>(fr * factor_);
  CVec y = CVec::Zero(static_cast<Eigen::Index>(output_size()));
  for (std::size_t b = 0; b < batch_; ++b)
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        y[static_cast<Eigen::Index>(b * orow * ocol + (r / fr) * ocol + c / factor_)] +=
            w * x[static_cast<Eigen::Index>(b * rows_ * cols_ + r * cols_ + c)];
  return y;
}

CVec DownsampleOp::adjoint(const CVec& y) const {
  check_output(y);
  const std::size_t fr = two_d_ ? factor_ : 1;
  const std::size_t orow = rows_ / fr, ocol = cols_ / factor_;
  const double w = 1.0 / static_cast<double>(fr * factor_);
  CVec x(static_cast<Eigen::Index>(input_size()));
  for (std::size_t b = 0; b < batch_; ++b)
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        x[static_cast<Eigen::Index>(b * rows_ * cols_ + r * cols_ + c)] =
            w * y[static_cast<Eigen::Index>(b * orow * ocol + (r / fr) * ocol + c / factor_)];
  return x;
}

KeyValues DownsampleOp::describe() const {
  KeyValues kv = LinearOp::describe();
  kv.set("factor", factor_);
  return kv;
}

// --- MRI ---------------------------------------------------------------------

namespace {

void check_mri_inputs(const MaskSpec& mask, const CoilMaps& coils) {
  if (mask.kind != MaskKind::kspace_line) throw std::invalid_argument("MRI operators need a k-space line mask");
  if (mask.shape != coils.shape)
    throw std::invalid_argument("mask shape " + shape_string(mask.shape) + " does not match coil shape " +
                                shape_string(coils.shape));
  if (coils.count() == 0) throw std::invalid_argument("MRI operators need at least one coil");
}

KeyValues describe_mri(KeyValues kv, const MaskSpec& mask, const CoilMaps& coils) {
  kv.set("acceleration", mask.acceleration);
  kv.set("acs_lines", mask.acs_lines);
  kv.set("mask_seed", mask.seed);
  kv.set("coils", coils.count());
  return kv;
}

// P F S x for one coil, in place in `buf`.
void coil_kspace(const CVec& x, const CVec& sens, const MaskSpec& mask, CVec& buf) {
  buf = x.cwiseProduct(sens);
  fftn({buf.data(), static_cast<std::size_t>(buf.size())}, mask.shape, false, true);
  for (Eigen::Index i = 0; i < buf.size(); ++i)
    if (!mask.keep[static_cast<std::size_t>(i)]) buf[i] = 0.0;
}

}  // namespace

MriAggregateOp::MriAggregateOp(MaskSpec mask, CoilMaps coils)
    : LinearOp(mask.shape, mask.shape), mask_(std::move(mask)), coils_(std::move(coils)) {
  check_mri_inputs(mask_, coils_);
}

CVec MriAggregateOp::apply(const CVec& x) const {
  check_input(x);
  CVec out = CVec::Zero(x.size());
  CVec buf;
  for (const auto& s : coils_.maps) {
    coil_kspace(x, s, mask_, buf);
    fftn({buf.data(), static_cast<std::size_t>(buf.size())}, mask_.shape, true, true);
    out += s.conjugate().cwiseProduct(buf);
  }
  return out;
}

KeyValues MriAggregateOp::describe() const { return describe_mri(LinearOp::describe(), mask_, coils_); }

namespace {

Shape coil_stack_shape(const MaskSpec& mask, const CoilMaps& coils) {
  Shape s{coils.count()};
  s.insert(s.end(), mask.shape.begin(), mask.shape.end());
  return s;
}

}  // namespace

MriForwardOp::MriForwardOp(MaskSpec mask, CoilMaps coils)
    : LinearOp(mask.shape, coil_stack_shape(mask, coils)), mask_(std::move(mask)), coils_(std::move(coils)) {
  check_mri_inputs(mask_, coils_);
}

CVec MriForwardOp::apply(const CVec& x) const {
  check_input(x);
  const Eigen::Index n = x.size();
  CVec out(static_cast<Eigen::Index>(output_size()));
  CVec buf;
  for (std::size_t i = 0; i < coils_.count(); ++i) {
    coil_kspace(x, coils_.maps[i], mask_, buf);
    out.segment(static_cast<Eigen::Index>(i) * n, n) = buf;
  }
  return out;
}

CVec MriForwardOp::adjoint(const CVec& y) const {
  check_output(y);
  const auto n = static_cast<Eigen::Index>(input_size());
  CVec out = CVec::Zero(n);
  CVec buf;
  for (std::size_t i = 0; i < coils_.count(); ++i) {
    buf = y.segment(static_cast<Eigen::Index>(i) * n, n);
    for (Eigen::Index k = 0; k < n; ++k)
      if (!mask_.keep[static_cast<std::size_t>(k)]) buf[k] = 0.0;
    fftn({buf.data(), static_cast<std::size_t>(n)}, mask_.shape, true, true);
    out += coils_.maps[i].conjugate().cwiseProduct(buf);
  }
  return out;
}

KeyValues MriForwardOp::describe() const { return describe_mri(LinearOp::describe(), mask_, coils_); }

// --- composite ---------------------------------------------------------------

CompositeOp::CompositeOp(LinearOpPtr outer, LinearOpPtr inner)
    : LinearOp(inner->input_shape(), outer->output_shape()), outer_(std::move(outer)), inner_(std::move(inner)) {
  if (outer_->input_size() != inner_->output_size())
    throw std::invalid_argument("composite: inner output does not feed outer input");
}

// --- factories -----------------------------------------------------------------

LinearOpPtr identity_operator(const Shape& shape) { return std::make_shared<IdentityOp>(shape); }
LinearOpPtr inpaint_operator(const MaskSpec& mask) { return std::make_shared<InpaintOp>(mask); }
LinearOpPtr gaussian_cs_operator(std::size_t n, std::size_t m, std::uint64_t seed) {
  return std::make_shared<GaussianCsOp>(Shape{n}, m, seed);
}
LinearOpPtr gaussian_cs_operator(const Shape& input_shape, std::size_t m, std::uint64_t seed) {
  return std::make_shared<GaussianCsOp>(input_shape, m, seed);
}
LinearOpPtr downsample_operator(const Shape& shape, std::size_t factor) {
  return std::make_shared<DownsampleOp>(shape, factor);
}
LinearOpPtr mri_operator(const MaskSpec& mask, const CoilMaps& coils) {
  return std::make_shared<MriAggregateOp>(mask, coils);
}
LinearOpPtr mri_forward_operator(const MaskSpec& mask, const CoilMaps& coils) {
  return std::make_shared<MriForwardOp>(mask, coils);
}
LinearOpPtr compose(LinearOpPtr outer, LinearOpPtr inner) {
  return std::make_shared<CompositeOp>(std::move(outer), std::move(inner));
}

Mat channel_matrix(const LinearOp& op, Field input) {
  const SignalSpace in{op.input_shape(), input};
  const auto cols = static_cast<Eigen::Index>(in.channels());
  Vec e = Vec::Zero(cols);
  Mat m;
  for (Eigen::Index j = 0; j < cols; ++j) {
    e[j] = 1.0;
    const Vec col = op.apply_channels(e, input);
    if (j == 0) m.resize(col.size(), cols);
    m.col(j) = col;
    e[j] = 0.0;
  }
  return m;
}

CMat dense_matrix(const LinearOp& op) {
  const auto n = static_cast<Eigen::Index>(op.input_size());
  CMat m(static_cast<Eigen::Index>(op.output_size()), n);
  CVec e = CVec::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    m.col(j) = op.apply(e);
    e[j] = 0.0;
  }
  return m;
}

double adjoint_check(const LinearOp& op, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("adjoint_check needs at least one trial");
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const CVec x = rng.complex_normal_vec(op.input_size());
    const CVec y = rng.complex_normal_vec(op.output_size());
    const CVec ax = op.apply(x);
    const CVec ahy = op.adjoint(y);
    const cplx lhs = y.dot(ax);    // <Ax, y> = y^H A x
    const cplx rhs = ahy.dot(x);   // <x, A^H y>
    const double num = std::abs(lhs - rhs);
    double denom = ax.norm() * y.norm();
    if (denom == 0.0) denom = x.norm() * ahy.norm();
    if (denom > 0.0) worst = std::max(worst, num / denom);
  }
  return worst;
}

}  // namespace ambient
