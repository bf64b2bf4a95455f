// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/cli/verify.hpp"

#include <cmath>
#include <limits>

#include "ambient/models/denoiser.hpp"
#include "ambient/models/training.hpp"
#include "ambient/operators/linear_op.hpp"
#include "ambient/oracles/mask_oracles.hpp"
#include "ambient/oracles/posterior_oracles.hpp"

namespace ambient {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

OracleReport below(std::string claim, double estimate, double tolerance, std::size_t trials, std::uint64_t seed) {
  OracleReport r;
  r.claim = std::move(claim);
  r.estimate = estimate;
  r.tolerance = tolerance;
  r.reference = kNaN;
  r.trials = trials;
  r.seed = seed;
  r.pass = estimate < tolerance;
  return r;
}

double rel_error(const Vec& a, const Vec& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

Vec central_difference(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
  Vec g(x.size());
  Vec xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    const double up = f(xp);
    xp[i] = x[i] - h;
    const double down = f(xp);
    xp[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

std::vector<double*> parameter_slots(MlpParams& p) {
  std::vector<double*> slots;
  for (std::size_t l = 0; l < p.layers(); ++l) {
    for (Eigen::Index i = 0; i < p.weights[l].size(); ++i) slots.push_back(p.weights[l].data() + i);
    for (Eigen::Index i = 0; i < p.biases[l].size(); ++i) slots.push_back(p.biases[l].data() + i);
  }
  return slots;
}

}  // namespace

std::vector<OracleReport> verify_adjoints(std::size_t pairs, std::uint64_t seed, double tolerance) {
  const Shape img{8, 8};
  const auto coils = make_coil_maps(img, 4, 0.5, Rng::derive_seed(seed, 1));
  const MaskSpec kmask = make_kspace_mask(img, 2.0, 2, Rng::derive_seed(seed, 2));
  const MaskSpec pmask = make_pixel_mask(img, 0.3, Rng::derive_seed(seed, 3));
  const std::vector<std::pair<std::string, LinearOpPtr>> ops{
      {"inpaint", inpaint_operator(pmask)},
      {"gaussian_cs", gaussian_cs_operator(img, 20, Rng::derive_seed(seed, 4))},
      {"downsample", downsample_operator(img, 2)},
      {"mri_aggregate", mri_operator(kmask, coils)},
      {"mri_forward", mri_forward_operator(kmask, coils)},
      {"composite", compose(downsample_operator(img, 2), inpaint_operator(pmask))},
  };
  std::vector<OracleReport> out;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const std::uint64_t s = Rng::derive_seed(seed, 100 + i);
    out.push_back(below("adjoint." + ops[i].first, adjoint_check(*ops[i].second, pairs, s), tolerance, pairs, s));
  }
  return out;
}

OracleReport verify_gradients(std::size_t points, std::uint64_t seed, double tolerance) {
  const MlpLayout layout{4, 4, true};
  const SignalSpace space{{4}, Field::real};
  double worst = 0.0;
  for (std::size_t point = 0; point < points; ++point) {
    Rng rng(Rng::derive_seed(seed, point));
    MlpParams p = MlpParams::init(layout, {6}, rng);
    for (auto& b : p.biases) b = 0.3 * rng.normal_vec(static_cast<std::size_t>(b.size()));
    Mat input(static_cast<Eigen::Index>(layout.input_dim()), 3);
    for (Eigen::Index j = 0; j < input.cols(); ++j) input.col(j) = rng.normal_vec(layout.input_dim());
    Mat target(static_cast<Eigen::Index>(layout.output_dim()), 3);
    for (Eigen::Index j = 0; j < target.cols(); ++j) target.col(j) = rng.normal_vec(layout.output_dim());
    const LossClosure loss = [&](ad::Tape& tape, ad::Var out) {
      return tape.scale(tape.sum_squares(tape.sub(out, tape.constant(target))), 0.5);
    };
    const MlpGradients g = grad_wrt_params(p, input, loss);

    // Parameters, flattened layer by layer.
    auto slots = parameter_slots(p);
    const auto k = static_cast<Eigen::Index>(slots.size());
    Vec theta(k), analytic(k);
    Eigen::Index at = 0;
    for (std::size_t l = 0; l < p.layers(); ++l) {
      for (Eigen::Index i = 0; i < g.weights[l].size(); ++i) analytic[at++] = g.weights[l].data()[i];
      for (Eigen::Index i = 0; i < g.biases[l].size(); ++i) analytic[at++] = g.biases[l][i];
    }
    for (Eigen::Index i = 0; i < k; ++i) theta[i] = *slots[static_cast<std::size_t>(i)];
    const Vec fd = central_difference(
        [&](const Vec& v) {
          for (Eigen::Index i = 0; i < k; ++i) *slots[static_cast<std::size_t>(i)] = v[i];
          const double f = 0.5 * (mlp_forward(p, input) - target).squaredNorm();
          for (Eigen::Index i = 0; i < k; ++i) *slots[static_cast<std::size_t>(i)] = theta[i];
          return f;
        },
        theta, 1e-5);
    worst = std::max(worst, rel_error(analytic, fd));

    // Packed input.
    const Eigen::Map<const Vec> flat(input.data(), input.size());
    const Mat gi = grad_wrt_input(p, input, loss);
    const Vec fdi = central_difference(
        [&](const Vec& v) {
          const Mat in = Eigen::Map<const Mat>(v.data(), input.rows(), input.cols());
          return 0.5 * (mlp_forward(p, in) - target).squaredNorm();
        },
        flat, 1e-5);
    worst = std::max(worst, rel_error(Eigen::Map<const Vec>(gi.data(), gi.size()), fdi));

    // Denoiser vector-Jacobian product.
    const MlpDenoiser d(p, space);
    const Corruption c = Corruption::inpaint(make_pixel_mask({4}, 0.3, rng.next_u64()));
    const Vec y = rng.normal_vec(4), u = rng.normal_vec(4);
    const double sigma = 0.2 + rng.uniform();
    const Vec fdv = central_difference([&](const Vec& v) { return u.dot(d.denoise(v, &c, sigma)); }, y, 1e-5);
    worst = std::max(worst, rel_error(d.input_vjp(y, &c, sigma, u), fdv));
  }
  return below("gradients", worst, tolerance, points, seed);
}

std::vector<OracleReport> verify_full_rank(const FullRankOptions& o) {
  const auto policy = CorruptionPolicy::accelerate();
  std::vector<OracleReport> out;
  for (std::size_t coils : o.coils) {
    for (double r : o.accelerations) {
      const auto dist = MaskDistribution::kspace({o.n}, r, o.acs_lines);
      Rng rng(Rng::derive_seed(o.seed, coils * 1000 + static_cast<std::uint64_t>(r * 10)));
      const MaskSpec p_tilde = further_corrupt(dist.draw(rng), policy, rng);
      const CoilMaps maps = coils == 1 ? CoilMaps::identity({o.n}) : make_coil_maps({o.n}, coils, o.coil_smoothness, rng.next_u64());
      OracleReport rep = expected_operator_fullrank(maps, dist, policy, p_tilde, o.trials, rng.next_u64());
      rep.claim = "theorem2.n" + std::to_string(o.n) + ".coils" + std::to_string(coils) + ".R" + format_double(r) +
                  "to" + format_double(r + 1.0);
      out.push_back(rep);
    }
  }
  return out;
}

OracleReport full_rank_exact_agreement(std::size_t n, std::size_t coils, double acceleration, std::size_t acs_lines,
                                      std::size_t trials, std::uint64_t seed) {
  const auto dist = MaskDistribution::kspace({n}, acceleration, acs_lines);
  const auto policy = CorruptionPolicy::accelerate();
  Rng rng(seed);
  const MaskSpec p_tilde = further_corrupt(dist.draw(rng), policy, rng);
  const CoilMaps maps = coils == 1 ? CoilMaps::identity({n}) : make_coil_maps({n}, coils, 0.5, rng.next_u64());
  OracleReport rep = expected_operator_fullrank(maps, dist, policy, p_tilde, trials, rng.next_u64());
  rep.claim = "theorem2.exact.n" + std::to_string(n);
  rep.reference = exact_operator_sigma_min(maps, dist, policy, p_tilde);
  rep.tolerance = 3.0 * rep.stderr_;
  rep.pass = std::abs(rep.estimate - rep.reference) <= rep.tolerance;
  return rep;
}

MinimizerCheckResult verify_ambient_minimizer(const MinimizerCheckOptions& o) {
  const DiscretePrior prior = DiscretePrior::random(o.atoms, o.n, 1.0, Rng::derive_seed(o.seed, 1));
  const auto dist = MaskDistribution::pixel({o.n}, o.erasure);
  const SignalSpace space{{o.n}, Field::real};
  const InpaintSampler sampler = [&](Rng& rng) {
    InpaintSample s;
    const Vec& x0 = prior.atoms[prior.draw(rng)];
    s.mask = dist.draw(rng);
    s.y0 = x0.cwiseProduct(s.mask.as_vec());
    return s;
  };
  TrainConfig c;
  c.policy = CorruptionPolicy::erase(o.delta);
  c.sigma_levels = o.sigmas;
  c.learning_rate = o.learning_rate;
  c.final_lr_fraction = o.final_lr_fraction;
  c.batch_size = o.batch;
  c.iterations = o.iterations;
  c.seed = Rng::derive_seed(o.seed, 2);
  Rng init_rng(Rng::derive_seed(o.seed, 3));
  const MlpParams init = MlpParams::init({o.n, o.n, true}, o.hidden, init_rng);
  const TrainResult trained = train_ambient_inpaint(sampler, space, init, c);

  const auto grid = posterior_grid(prior, dist, o.delta, o.sigmas, o.grid_per_sigma, Rng::derive_seed(o.seed, 4));
  auto model = [](const MlpParams& p) -> AmbientDenoiseFn {
    return [&p](const Vec& y, const MaskSpec& m, double sigma) { return mlp_denoise(p, y, m.as_vec(), sigma); };
  };
  MinimizerCheckResult r{theorem1_check(model(trained.params), grid, 0.05), theorem1_check(model(init), grid, 0.05)};
  r.trained.claim = "theorem1.trained";
  r.untrained.claim = "theorem1.untrained";
  r.trained.seed = r.untrained.seed = o.seed;
  return r;
}

}  // namespace ambient
