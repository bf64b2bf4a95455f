// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>

#include "ambient/models/autodiff.hpp"
#include "ambient/models/checkpoint.hpp"
#include "ambient/models/denoiser.hpp"
#include "ambient/models/gaussian_mixture.hpp"
#include "ambient/models/mlp.hpp"
#include "finite_diff.hpp"

namespace ambient {
namespace {

using testing::fd_gradient;
using testing::fd_jacobian;
using testing::rel_error;

Mat random_mat(Eigen::Index r, Eigen::Index c, Rng& rng) {
  Mat m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = rng.normal();
  return m;
}

// ---- autodiff -------------------------------------------------------------

TEST(Tape, LinearNetHalfSquaredNorm) {
  Rng rng(1);
  const Mat w = random_mat(3, 4, rng);
  const Mat x = random_mat(4, 1, rng);
  ad::Tape tape;
  const auto wv = tape.leaf(w);
  const auto xv = tape.leaf(x);
  const auto loss = tape.scale(tape.sum_squares(tape.matmul(wv, xv)), 0.5);
  tape.backward(loss);
  EXPECT_LT((tape.grad(xv) - w.transpose() * (w * x)).norm(), 1e-12);
  EXPECT_LT((tape.grad(wv) - (w * x) * x.transpose()).norm(), 1e-12);
}

TEST(Tape, ConstantLossHasZeroGradient) {
  ad::Tape tape;
  const auto x = tape.leaf(Mat::Ones(3, 2));
  const auto c = tape.constant(Mat::Constant(1, 1, 4.0));
  tape.backward(c);
  EXPECT_EQ(tape.grad(x), Mat::Zero(3, 2));
}

TEST(Tape, NonScalarLossIsRejected) {
  ad::Tape tape;
  const auto x = tape.leaf(Mat::Ones(2, 2));
  EXPECT_THROW(tape.backward(tape.tanh(x)), std::invalid_argument);
}

TEST(Tape, ShapeMismatchIsRejected) {
  ad::Tape tape;
  const auto a = tape.leaf(Mat::Ones(2, 3));
  const auto b = tape.leaf(Mat::Ones(2, 2));
  EXPECT_THROW(tape.matmul(a, b), std::invalid_argument);
  EXPECT_THROW(tape.add(a, b), std::invalid_argument);
}

// Exercises every node type in one expression and checks it against finite differences.
TEST(Tape, EveryOpMatchesFiniteDifferences) {
  Rng rng(2);
  const Mat a0 = random_mat(3, 2, rng);
  const Mat bias = random_mat(3, 1, rng);
  const Mat lin = random_mat(4, 3, rng);
  auto build = [&](ad::Tape& tape, const Vec& flat, ad::Var* leaf) {
    const auto a = tape.leaf(Eigen::Map<const Mat>(flat.data(), 3, 2));
    if (leaf) *leaf = a;
    const auto h = tape.tanh(tape.add_bias(a, tape.constant(bias)));
    const auto stacked = tape.vstack({h, tape.mul(h, tape.scale(a, 2.0))});
    const auto part = tape.rows(stacked, 1, 4);
    const auto mapped = tape.linear_map(
        tape.rows(stacked, 0, 3), [&](Eigen::Index, const Vec& v) { return Vec(lin * v); },
        [&](Eigen::Index, const Vec& g) { return Vec(lin.transpose() * g); });
    const auto diff = tape.sub(part, mapped);
    return tape.add(tape.sum_squares(diff), tape.sum(tape.mul(part, part)));
  };
  const Vec flat = Eigen::Map<const Vec>(a0.data(), 6);
  ad::Tape tape;
  ad::Var leaf;
  const auto loss = build(tape, flat, &leaf);
  tape.backward(loss);
  const Mat g = tape.grad(leaf);
  const Vec fd = fd_gradient(
      [&](const Vec& v) {
        ad::Tape t;
        return build(t, v, nullptr).value()(0, 0);
      },
      flat);
  EXPECT_LT(rel_error(Eigen::Map<const Vec>(g.data(), 6), fd), 1e-7);
}

// ---- Gaussian mixture -----------------------------------------------------

GaussianMixturePrior two_component_2d() {
  GaussianMixturePrior p;
  p.weights = {0.3, 0.7};
  p.means = {(Vec(2) << -1.0, 2.0).finished(), (Vec(2) << 1.5, -0.5).finished()};
  p.variances = {0.4, 0.25};
  return p;
}

TEST(GaussianMixture, Validation) {
  GaussianMixturePrior p = two_component_2d();
  p.weights = {0.5, 0.6};
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = two_component_2d();
  p.variances[1] = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(GmDenoise, ZeroSigmaReturnsInput) {
  const Vec x = (Vec(2) << 0.3, -7.0).finished();
  EXPECT_EQ(gm_denoise(two_component_2d(), x, 0.0), x);
}

TEST(GmDenoise, SingleComponentClosedForm) {
  const auto p = GaussianMixturePrior::gaussian((Vec(3) << 1, -2, 0.5).finished(), 0.8);
  const Vec x = (Vec(3) << 0.2, 0.1, -1).finished();
  const double s = 1.3;
  const Vec expected = (0.8 * x + s * s * p.means[0]) / (0.8 + s * s);
  EXPECT_LT((gm_denoise(p, x, s) - expected).norm(), 1e-14);
}

// E[x0 | x_t] is affine for a Gaussian prior; the Monte-Carlo regression of
// x0 on x_t recovers slope tau^2/(tau^2+sigma^2) and intercept sigma^2 mu/(tau^2+sigma^2).
TEST(GmDenoise, SingleComponentMatchesMonteCarloRegression) {
  const double mu = 1.5, tau2 = 0.6, sigma = 0.9;
  const auto p = GaussianMixturePrior::gaussian(Vec::Constant(1, mu), tau2);
  Rng rng(11);
  const std::size_t n = 1000000;
  double sx = 0, sy = 0, sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x0 = mu + std::sqrt(tau2) * rng.normal();
    const double xt = x0 + sigma * rng.normal();
    sx += xt;
    sy += x0;
    sxy += xt * x0;
    sxx += xt * xt;
  }
  const double mx = sx / n, my = sy / n;
  const double slope = (sxy / n - mx * my) / (sxx / n - mx * mx);
  const double intercept = my - slope * mx;
  const double a = gm_denoise(p, Vec::Constant(1, 1.0), sigma)[0] - gm_denoise(p, Vec::Zero(1), sigma)[0];
  const double b = gm_denoise(p, Vec::Zero(1), sigma)[0];
  EXPECT_NEAR(a, slope, 0.005 * slope);
  EXPECT_NEAR(b, intercept, 0.005 * std::abs(intercept));
}

TEST(GmDenoise, LargeSigmaGivesPriorMean) {
  const auto p = two_component_2d();
  const Vec x = (Vec(2) << 3.0, 1.0).finished();
  EXPECT_LT((gm_denoise(p, x, 1e6) - p.mean()).norm(), 1e-5);
}

TEST(GmDenoise, VjpMatchesFiniteDifferencesAndIsSymmetric) {
  const auto p = two_component_2d();
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec x = 2.0 * rng.normal_vec(2);
    const double sigma = 0.2 + trial * 0.1;
    const Mat j = fd_jacobian([&](const Vec& v) { return gm_denoise(p, v, sigma); }, x);
    const Vec u = rng.normal_vec(2);
    EXPECT_LT(rel_error(gm_denoise_vjp(p, x, sigma, u), j.transpose() * u), 1e-6);
    EXPECT_LT((j - j.transpose()).norm(), 1e-6 * std::max(1.0, j.norm()));
  }
}

// The conditional mean minimizes the denoising loss; no competitor beats it
// beyond Monte-Carlo error.
TEST(GmDenoise, IsTheMseMinimizer) {
  const auto p = two_component_2d();
  const double sigma = 0.8;
  Rng rng(5);
  const std::size_t n = 100000;
  std::vector<std::function<Vec(const Vec&)>> competitors = {
      [](const Vec& x) { return x; },
      [&](const Vec&) { return p.mean(); },
      [&](const Vec& x) { return Vec(0.9 * gm_denoise(p, x, sigma)); },
      [&](const Vec& x) { return gm_denoise(p, x, 1.2 * sigma); },
  };
  std::vector<double> diffs(competitors.size() * n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec x0 = p.sample(rng);
    const Vec xt = x0 + sigma * rng.normal_vec(2);
    const double base = (gm_denoise(p, xt, sigma) - x0).squaredNorm();
    for (std::size_t c = 0; c < competitors.size(); ++c) diffs[c * n + i] = (competitors[c](xt) - x0).squaredNorm() - base;
  }
  for (std::size_t c = 0; c < competitors.size(); ++c) {
    double m = 0, m2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      m += diffs[c * n + i];
      m2 += diffs[c * n + i] * diffs[c * n + i];
    }
    m /= n;
    const double se = std::sqrt((m2 / n - m * m) / n);
    EXPECT_GE(m, -3.0 * se) << "competitor " << c;
  }
}

TEST(GmAmbient, IdentityOperatorEqualsGmDenoise) {
  const auto p = two_component_2d();
  const auto op = identity_operator({2});
  const Vec x = (Vec(2) << 0.5, 0.7).finished();
  for (double s : {0.0, 0.1, 1.0, 5.0})
    EXPECT_LT((gm_ambient_denoise(p, x, *op, Field::real, s) - gm_denoise(p, x, s)).norm(), 1e-12) << s;
}

// Posterior mean by brute-force quadrature over a fine grid of x0 values.
Vec grid_posterior(const GaussianMixturePrior& p, double y1, double sigma) {
  const double h = 0.01, lim = 8.0;
  double z = 0, m1 = 0, m2 = 0;
  for (double a = -lim; a <= lim; a += h) {
    const double lik = std::exp(-0.5 * (y1 - a) * (y1 - a) / (sigma * sigma));
    for (double b = -lim; b <= lim; b += h) {
      double prior = 0.0;
      for (std::size_t k = 0; k < 2; ++k) {
        const double d2 = (a - p.means[k][0]) * (a - p.means[k][0]) + (b - p.means[k][1]) * (b - p.means[k][1]);
        prior += p.weights[k] / (2 * M_PI * p.variances[k]) * std::exp(-0.5 * d2 / p.variances[k]);
      }
      const double w = prior * lik;
      z += w;
      m1 += w * a;
      m2 += w * b;
    }
  }
  return (Vec(2) << m1 / z, m2 / z).finished();
}

TEST(GmAmbient, ErasedCoordinateMatchesGridQuadrature) {
  const auto p = two_component_2d();
  MaskSpec m = make_pixel_mask({2}, 0.0, 0);
  m.keep = {1, 0};
  const auto op = inpaint_operator(m);
  for (double y1 : {-1.0, 0.4, 2.0}) {
    const double sigma = 0.6;
    const Vec y = (Vec(2) << y1, 0.0).finished();
    const Vec got = gm_ambient_denoise(p, y, *op, Field::real, sigma);
    EXPECT_LT((got - grid_posterior(p, y1, sigma)).cwiseAbs().maxCoeff(), 1e-3) << y1;
  }
}

TEST(GmAmbient, LargeSigmaGivesPriorMean) {
  const auto p = two_component_2d();
  const auto op = gaussian_cs_operator(2, 1, 3);
  const Vec y = Vec::Constant(1, 2.0);
  EXPECT_LT((gm_ambient_denoise(p, y, *op, Field::real, 1e6) - p.mean()).norm(), 1e-5);
}

TEST(GmAmbient, ZeroSigmaRankDeficientIsAnError) {
  const auto p = two_component_2d();
  const auto op = gaussian_cs_operator(2, 1, 3);
  EXPECT_THROW(gm_ambient_denoise(p, Vec::Zero(1), *op, Field::real, 0.0), std::domain_error);
  const auto full = gaussian_cs_operator(2, 2, 3);
  EXPECT_NO_THROW(gm_ambient_denoise(p, Vec::Zero(2), *full, Field::real, 0.0));
}

TEST(GmAmbient, VjpMatchesFiniteDifferences) {
  Rng rng(8);
  GaussianMixturePrior p;
  for (int k = 0; k < 3; ++k) {
    p.means.push_back(rng.normal_vec(4));
    p.variances.push_back(0.1 + 0.2 * k);
    p.weights.push_back(1.0 / 3.0);
  }
  const auto op = inpaint_operator(make_pixel_mask({4}, 0.4, 1));
  const GmAmbientConditioner cond(p, *op, Field::real);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec y = op->apply_channels(rng.normal_vec(4), Field::real);
    const double sigma = 0.3 + 0.1 * trial;
    const Mat j = fd_jacobian([&](const Vec& v) { return cond.denoise(v, sigma); }, y);
    const Vec u = rng.normal_vec(4);
    EXPECT_LT(rel_error(cond.vjp(y, sigma, u), j.transpose() * u), 1e-6);
  }
}

TEST(GmAmbient, ComplexMriOperator) {
  // Complex signals as interleaved channels; full sampling reduces to gm_denoise.
  Rng rng(9);
  GaussianMixturePrior p;
  for (int k = 0; k < 2; ++k) {
    p.means.push_back(rng.normal_vec(16));
    p.variances.push_back(0.3);
    p.weights.push_back(0.5);
  }
  const auto coils = make_coil_maps({8}, 2, 0.5, 1);
  const auto full = mri_operator(make_kspace_mask({8}, 1.0, 0, 0), coils);
  const Vec x = rng.normal_vec(16);
  EXPECT_LT((gm_ambient_denoise(p, x, *full, Field::complex, 0.5) - gm_denoise(p, x, 0.5)).norm(), 1e-9);
}

// ---- MLP ------------------------------------------------------------------

MlpParams random_net(const MlpLayout& layout, std::vector<std::size_t> hidden, std::uint64_t seed) {
  Rng rng(seed);
  MlpParams p = MlpParams::init(layout, hidden, rng);
  for (auto& b : p.biases) b = 0.3 * rng.normal_vec(b.size());
  return p;
}

TEST(Mlp, ZeroWeightsGiveBiasOutput) {
  MlpLayout layout{3, 3, true};
  Rng rng(1);
  MlpParams p = MlpParams::init(layout, {5}, rng);
  for (auto& w : p.weights) w.setZero();
  p.biases.back() = (Vec(3) << 1, 2, 3).finished();
  EXPECT_EQ(mlp_denoise(p, rng.normal_vec(3), Vec::Ones(3), 0.7), p.biases.back());
}

TEST(Mlp, ForwardIsDeterministic) {
  const MlpParams p = random_net({4, 4, true}, {8, 8}, 2);
  Rng rng(3);
  const Vec y = rng.normal_vec(4);
  const Vec m = Vec::Ones(4);
  const Vec a = mlp_denoise(p, y, m, 0.5);
  const Vec b = mlp_denoise(p, y, m, 0.5);
  EXPECT_EQ(0, std::memcmp(a.data(), b.data(), sizeof(double) * a.size()));
}

TEST(Mlp, ShapeMismatchIsAnError) {
  const MlpParams p = random_net({4, 4, true}, {8}, 2);
  EXPECT_THROW(mlp_denoise(p, Vec::Zero(3), Vec::Ones(4), 0.5), std::invalid_argument);
  EXPECT_THROW(mlp_denoise(p, Vec::Zero(4), Vec::Ones(2), 0.5), std::invalid_argument);
}

// With zero activation biases the network is odd around zero input, so a small
// perturbation responds linearly with the Jacobian row from finite differences.
TEST(Mlp, PerturbationLinearityAtZeroBias) {
  MlpLayout layout{5, 0, false};
  Rng rng(4);
  MlpParams p = MlpParams::init(layout, {7}, rng);
  const Vec zero = Vec::Zero(5);
  const Mat j = fd_jacobian([&](const Vec& v) { return mlp_denoise(p, v, Vec(), 0.0); }, zero);
  const Vec d = 1e-4 * rng.normal_vec(5);
  const Vec out = mlp_denoise(p, d, Vec(), 0.0) - mlp_denoise(p, zero, Vec(), 0.0);
  EXPECT_LT(rel_error(out, j * d), 1e-6);
}

TEST(Mlp, GradientsMatchFiniteDifferencesAt100Points) {
  const MlpLayout layout{3, 2, true};
  Rng rng(5);
  double worst = 0.0;
  for (int point = 0; point < 100; ++point) {
    MlpParams p = random_net(layout, {6}, 100 + point);
    const Mat input = random_mat(6, 3, rng);
    const Mat target = random_mat(3, 3, rng);
    const LossClosure loss = [&](ad::Tape& tape, ad::Var out) {
      return tape.scale(tape.sum_squares(tape.sub(out, tape.constant(target))), 0.5);
    };
    const MlpGradients g = grad_wrt_params(p, input, loss);
    // Flatten parameters in layer order.
    std::vector<double*> slots;
    Vec analytic(static_cast<Eigen::Index>(p.parameter_count()));
    Eigen::Index k = 0;
    for (std::size_t l = 0; l < p.layers(); ++l) {
      for (Eigen::Index i = 0; i < p.weights[l].size(); ++i) {
        slots.push_back(p.weights[l].data() + i);
        analytic[k++] = g.weights[l].data()[i];
      }
      for (Eigen::Index i = 0; i < p.biases[l].size(); ++i) {
        slots.push_back(p.biases[l].data() + i);
        analytic[k++] = g.biases[l][i];
      }
    }
    Vec theta(k);
    for (Eigen::Index i = 0; i < k; ++i) theta[i] = *slots[static_cast<std::size_t>(i)];
    const Vec fd = fd_gradient(
        [&](const Vec& v) {
          for (Eigen::Index i = 0; i < k; ++i) *slots[static_cast<std::size_t>(i)] = v[i];
          const Mat out = mlp_forward(p, input);
          for (Eigen::Index i = 0; i < k; ++i) *slots[static_cast<std::size_t>(i)] = theta[i];
          return 0.5 * (out - target).squaredNorm();
        },
        theta);
    worst = std::max(worst, rel_error(analytic, fd));
    const Mat gi = grad_wrt_input(p, input, loss);
    EXPECT_LT((gi - g.input).norm(), 1e-12);
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(MlpDenoiser, InputVjpMatchesFiniteDifferences) {
  const SignalSpace space{{4}, Field::real};
  const MlpDenoiser d(random_net({4, 4, true}, {10}, 6), space);
  const Corruption c = Corruption::inpaint(make_pixel_mask({4}, 0.3, 2));
  Rng rng(7);
  const Vec y = rng.normal_vec(4);
  const Mat j = fd_jacobian([&](const Vec& v) { return d.denoise(v, &c, 0.4); }, y);
  const Vec u = rng.normal_vec(4);
  EXPECT_LT(rel_error(d.input_vjp(y, &c, 0.4, u), j.transpose() * u), 1e-6);
  EXPECT_THROW(d.denoise(y, nullptr, 0.4), std::invalid_argument);
}

TEST(GmAmbientDenoiser, UnboundCorruptionIsConditionedOnTheFly) {
  const auto p = two_component_2d();
  const SignalSpace space{{2}, Field::real};
  const Corruption bound = Corruption::inpaint(make_pixel_mask({2}, 0.0, 0));
  MaskSpec other_mask = make_pixel_mask({2}, 0.0, 0);
  other_mask.keep = {0, 1};
  const Corruption other = Corruption::inpaint(other_mask);
  const GmAmbientDenoiser d(p, space, bound);
  const Vec y = (Vec(2) << 0.0, 1.0).finished();
  EXPECT_LT((d.denoise(y, &other, 0.5) - gm_ambient_denoise(p, y, *other.op, Field::real, 0.5)).norm(), 1e-14);
  EXPECT_LT((d.denoise(y, &bound, 0.5) - gm_denoise(p, y, 0.5)).norm(), 1e-12);
}

// ---- checkpoints ----------------------------------------------------------

TEST(Checkpoint, RoundTrip) {
  const auto stem = std::filesystem::temp_directory_path() / "ambient_ckpt" / "model";
  const MlpParams p = random_net({6, 3, true}, {5, 4}, 9);
  KeyValues extra;
  extra.set("config_hash", "abc");
  save_checkpoint(stem, p, extra, DType::f64);
  const Checkpoint back = load_checkpoint(stem);
  EXPECT_EQ(back.manifest.get("config_hash"), "abc");
  ASSERT_EQ(back.params.layers(), p.layers());
  for (std::size_t l = 0; l < p.layers(); ++l) {
    EXPECT_EQ(back.params.weights[l], p.weights[l]);
    EXPECT_EQ(back.params.biases[l], p.biases[l]);
  }
  save_checkpoint(stem, p, extra, DType::f32);
  const Checkpoint narrow = load_checkpoint(stem);
  EXPECT_LT((narrow.params.weights[0] - p.weights[0]).cwiseAbs().maxCoeff(), 1e-6);
  std::filesystem::remove_all(stem.parent_path());
}

}  // namespace
}  // namespace ambient
