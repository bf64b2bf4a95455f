// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>

#include "ambient/numerics/fft.hpp"
#include "ambient/numerics/rng.hpp"
#include "ambient/operators/coils.hpp"
#include "ambient/operators/linear_op.hpp"
#include "ambient/operators/mask.hpp"
#include "ambient/operators/serialize.hpp"
#include "ambient/operators/signal_space.hpp"

namespace ambient {
namespace {

TEST(Mask, LineBudgetsFollowRounding) {
  EXPECT_EQ(line_budget(128, 2), 64u);
  EXPECT_EQ(line_budget(128, 4), 32u);
  EXPECT_EQ(line_budget(128, 6), 21u);
  EXPECT_EQ(line_budget(128, 8), 16u);
  EXPECT_EQ(line_budget(128, 3), 43u);
  EXPECT_THROW(line_budget(128, 0.5), std::invalid_argument);
}

TEST(Mask, KspaceMaskKeepsAcsAndBudget) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const MaskSpec m = make_kspace_mask({8, 128}, 4.0, 20, seed);
    EXPECT_EQ(m.kept_lines(), 32u);
    const auto flags = m.line_flags();
    for (auto j : acs_line_indices(128, 20)) EXPECT_TRUE(flags[j]);
    EXPECT_EQ(m.kept_entries(), 32u * 8u);
  }
  EXPECT_THROW(make_kspace_mask({64}, 8.0, 20, 0), std::invalid_argument);
}

TEST(Mask, AcsBlockIsCentered) {
  EXPECT_EQ(acs_line_indices(16, 4), (std::vector<std::size_t>{6, 7, 8, 9}));
  EXPECT_EQ(acs_line_indices(8, 2), (std::vector<std::size_t>{3, 4}));
}

TEST(Mask, SeedDeterminism) {
  EXPECT_EQ(make_kspace_mask({64}, 4.0, 4, 9).keep, make_kspace_mask({64}, 4.0, 4, 9).keep);
  EXPECT_NE(make_kspace_mask({64}, 4.0, 4, 9).keep, make_kspace_mask({64}, 4.0, 4, 10).keep);
  EXPECT_EQ(make_pixel_mask({32}, 0.3, 1).keep, make_pixel_mask({32}, 0.3, 1).keep);
}

TEST(Mask, PixelErasureRate) {
  const MaskSpec m = make_pixel_mask({100, 100}, 0.8, 5);
  EXPECT_NEAR(static_cast<double>(m.kept_entries()) / 1e4, 0.2, 0.02);
  EXPECT_THROW(make_pixel_mask({4}, 1.0, 0), std::invalid_argument);
}

TEST(FurtherCorrupt, KspaceGoesFromRToRPlusOne) {
  for (double r : {2.0, 4.0, 6.0, 8.0}) {
    const MaskSpec p = make_kspace_mask({128}, r, 8, 3);
    const MaskSpec pt = further_corrupt(p, CorruptionPolicy::accelerate(), 17);
    EXPECT_EQ(pt.kept_lines(), line_budget(128, r + 1));
    EXPECT_DOUBLE_EQ(pt.acceleration, r + 1);
    for (std::size_t i = 0; i < p.entries(); ++i) EXPECT_LE(pt.keep[i], p.keep[i]);
    for (auto j : acs_line_indices(128, 8)) EXPECT_TRUE(pt.keep[j]);
  }
}

TEST(FurtherCorrupt, PixelErasureIsASubset) {
  const MaskSpec p = make_pixel_mask({64}, 0.2, 1);
  const MaskSpec pt = further_corrupt(p, CorruptionPolicy::erase(0.5), 2);
  for (std::size_t i = 0; i < p.entries(); ++i) EXPECT_LE(pt.keep[i], p.keep[i]);
  EXPECT_NEAR(pt.erasure, 1.0 - 0.8 * 0.5, 1e-15);
}

TEST(FurtherCorrupt, RejectsMismatchedPolicies) {
  const MaskSpec p = make_pixel_mask({16}, 0.2, 1);
  EXPECT_THROW(further_corrupt(p, CorruptionPolicy::accelerate(), 0), std::invalid_argument);
  EXPECT_THROW(further_corrupt(p, CorruptionPolicy::erase(0.0), 0), std::invalid_argument);
  const MaskSpec k = make_kspace_mask({16}, 2.0, 4, 0);
  EXPECT_THROW(further_corrupt(k, CorruptionPolicy::erase(0.1), 0), std::invalid_argument);
  const MaskSpec tight = make_kspace_mask({16}, 4.0, 4, 0);
  EXPECT_THROW(further_corrupt(tight, CorruptionPolicy::accelerate(), 0), std::invalid_argument);
}

TEST(Coils, NormalizedPointwise) {
  for (std::size_t n : {1u, 2u, 4u, 8u}) {
    const CoilMaps c = make_coil_maps({16, 16}, n, 0.6, n);
    EXPECT_EQ(c.count(), n);
    EXPECT_LT(c.normalization_residual(), 1e-12);
  }
  const CoilMaps c1 = make_coil_maps({32}, 3, 0.5, 1);
  EXPECT_LT(c1.normalization_residual(), 1e-12);
}

TEST(Coils, TensorRoundTrip) {
  const CoilMaps c = make_coil_maps({8, 8}, 2, 0.6, 4);
  const CoilMaps back = CoilMaps::from_tensor(c.to_tensor());
  ASSERT_EQ(back.count(), 2u);
  EXPECT_EQ(back.shape, c.shape);
  EXPECT_EQ(back.maps[1], c.maps[1]);
}

std::vector<LinearOpPtr> all_operators() {
  const CoilMaps coils = make_coil_maps({8, 8}, 2, 0.6, 1);
  return {identity_operator({12}),
          inpaint_operator(make_pixel_mask({6, 5}, 0.3, 2)),
          gaussian_cs_operator(40, 17, 3),
          downsample_operator({16}, 4),
          downsample_operator({8, 12}, 2),
          mri_operator(make_kspace_mask({8, 8}, 2.0, 2, 4), coils),
          mri_forward_operator(make_kspace_mask({8, 8}, 2.0, 2, 4), coils),
          compose(downsample_operator({40}, 2), gaussian_cs_operator(40, 40, 5))};
}

TEST(LinearOp, AdjointIdentityHolds) {
  for (const auto& op : all_operators()) EXPECT_LT(adjoint_check(*op, 100, 7), 1e-10) << to_string(op->kind());
}

TEST(LinearOp, ChannelMatrixMatchesComplexMatrix) {
  for (const auto& op : all_operators()) {
    const CMat a = dense_matrix(*op);
    const Mat m = channel_matrix(*op, Field::complex);
    ASSERT_EQ(m.rows(), 2 * a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        EXPECT_NEAR(m(2 * i, 2 * j), a(i, j).real(), 1e-12);
        EXPECT_NEAR(m(2 * i, 2 * j + 1), -a(i, j).imag(), 1e-12);
        EXPECT_NEAR(m(2 * i + 1, 2 * j), a(i, j).imag(), 1e-12);
      }
  }
}

TEST(LinearOp, AdjointChannelsIsTranspose) {
  const auto op = mri_operator(make_kspace_mask({8}, 2.0, 2, 1), make_coil_maps({8}, 2, 0.5, 2));
  const Mat m = channel_matrix(*op, Field::complex);
  Rng rng(3);
  const Vec y = rng.normal_vec(16);
  EXPECT_LT((op->adjoint_channels(y, Field::complex) - m.transpose() * y).norm(), 1e-12);
}

TEST(LinearOp, InpaintZeroesErasedEntries) {
  const MaskSpec m = make_pixel_mask({10}, 0.5, 8);
  const auto op = inpaint_operator(m);
  const CVec x = CVec::Constant(10, cplx(2.0, -1.0));
  const CVec y = op->apply(x);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(y[static_cast<Eigen::Index>(i)], m.keep[i] ? x[0] : cplx(0.0));
}

TEST(LinearOp, DownsampleAveragesBlocks) {
  const auto op = downsample_operator({2, 4}, 2);
  CVec x(8);
  x << 1, 2, 3, 4, 5, 6, 7, 8;
  const CVec y = op->apply(x);
  ASSERT_EQ(y.size(), 2);
  EXPECT_NEAR(y[0].real(), (1 + 2 + 5 + 6) / 4.0, 1e-15);
  EXPECT_NEAR(y[1].real(), (3 + 4 + 7 + 8) / 4.0, 1e-15);
  EXPECT_THROW(downsample_operator({6}, 4), std::invalid_argument);
}

TEST(LinearOp, GaussianCsEntryVariance) {
  const auto op = gaussian_cs_operator(400, 100, 9);
  const auto& a = dynamic_cast<const GaussianCsOp&>(*op).matrix();
  EXPECT_NEAR(a.squaredNorm() / a.size(), 1.0 / 100, 0.05 / 100);
}

TEST(LinearOp, FullySampledMriIsIdentity) {
  const CoilMaps coils = make_coil_maps({8, 8}, 4, 0.6, 3);
  const auto op = mri_operator(make_kspace_mask({8, 8}, 1.0, 0, 0), coils);
  Rng rng(1);
  const CVec x = rng.complex_normal_vec(64);
  EXPECT_LT((op->apply(x) - x).norm(), 1e-12 * x.norm());
}

TEST(LinearOp, MriAggregateEqualsAdjointOfForward) {
  const CoilMaps coils = make_coil_maps({16}, 2, 0.5, 3);
  const MaskSpec mask = make_kspace_mask({16}, 2.0, 2, 5);
  const auto agg = mri_operator(mask, coils);
  const auto fwd = mri_forward_operator(mask, coils);
  Rng rng(2);
  const CVec x = rng.complex_normal_vec(16);
  EXPECT_LT((agg->apply(x) - fwd->adjoint(fwd->apply(x))).norm(), 1e-12 * x.norm());
}

TEST(LinearOp, ShapeErrors) {
  const auto op = gaussian_cs_operator(10, 4, 0);
  EXPECT_THROW(op->apply(CVec::Zero(9)), std::invalid_argument);
  EXPECT_THROW(op->adjoint(CVec::Zero(10)), std::invalid_argument);
  EXPECT_THROW(mri_operator(make_pixel_mask({8}, 0.1, 0), CoilMaps::identity({8})), std::invalid_argument);
  EXPECT_THROW(compose(gaussian_cs_operator(5, 3, 0), gaussian_cs_operator(10, 4, 0)), std::invalid_argument);
}

TEST(SignalSpace, ChannelsRoundTrip) {
  CVec x(2);
  x << cplx(1, 2), cplx(-3, 4);
  const Vec ch = to_channels(x, Field::complex);
  EXPECT_EQ(ch, (Vec(4) << 1, 2, -3, 4).finished());
  EXPECT_EQ(from_channels(ch, Field::complex), x);
  EXPECT_EQ(to_channels(x, Field::real), (Vec(2) << 1, -3).finished());
}

TEST(Serialize, OperatorsRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "ambient_operator_roundtrip";
  std::filesystem::create_directories(dir);
  for (const auto& op : all_operators()) {
    if (op->kind() == OpKind::composite) {
      EXPECT_THROW(save_operator(dir / "c", *op), std::invalid_argument);
      continue;
    }
    const auto stem = dir / to_string(op->kind());
    save_operator(stem, *op);
    const auto back = load_operator(stem);
    EXPECT_EQ(back->kind(), op->kind());
    EXPECT_LT((dense_matrix(*back) - dense_matrix(*op)).norm(), 1e-6);
  }
  std::filesystem::remove_all(dir);
}

TEST(Serialize, MaskRoundTripIsExact) {
  const auto stem = std::filesystem::temp_directory_path() / "ambient_mask_roundtrip";
  const MaskSpec m = make_kspace_mask({4, 16}, 2.0, 4, 77);
  save_mask(stem, m);
  const MaskSpec back = load_mask(stem);
  EXPECT_EQ(back.keep, m.keep);
  EXPECT_EQ(back.acs_lines, 4u);
  EXPECT_EQ(back.seed, 77u);
  EXPECT_EQ(back.kind, MaskKind::kspace_line);
}

}  // namespace
}  // namespace ambient
