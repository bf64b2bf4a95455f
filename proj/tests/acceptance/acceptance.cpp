// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance run: one PASS/FAIL line per criterion, exit code 1
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "ambient/baselines/fista.hpp"
#include "ambient/cli/experiment.hpp"
#include "ambient/cli/verify.hpp"
#include "ambient/models/denoiser.hpp"
#include "ambient/numerics/haar.hpp"
#include "ambient/operators/linear_op.hpp"
#include "ambient/samplers/samplers.hpp"

namespace fs = std::filesystem;
using namespace ambient;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < budget_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s criterion %d (%s): %s [%.1f s, budget %.0f s%s]\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              o.detail.c_str(), secs, budget_s, in_time ? "" : ", over budget");
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// x ~ N(mu, tau2 I), y = A x + N(0, s2 I): posterior mean by direct solve.
Vec conjugate_mean(const Vec& mu, double tau2, const Mat& a, const Vec& y, double s2) {
  const Mat cov = tau2 * a * a.transpose() + s2 * Mat::Identity(a.rows(), a.rows());
  return mu + tau2 * a.transpose() * cov.ldlt().solve(y - a * mu);
}

struct GaussianCs {
  Vec mu = (Vec(4) << 1.0, -2.0, 0.5, 0.0).finished();
  double tau2 = 0.1;
  GaussianMixturePrior prior = GaussianMixturePrior::gaussian(mu, tau2);
  SignalSpace space{{4}, Field::real};
  LinearOpPtr op = gaussian_cs_operator(4, 2, 17);
  Vec y;
  InverseProblem problem;
  GaussianCs() {
    Rng rng(5);
    const Vec x_star = (Vec(4) << 1.5, -1.0, 0.0, 0.8).finished();
    y = op->apply_channels(x_star, Field::real) + rng.normal_vec(2);
    problem = {op, CVec(y.cast<cplx>())};
  }
  Vec truth() const { return conjugate_mean(mu, tau2, channel_matrix(*op, Field::real), y, 1.0); }
};

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[e.path().filename().string()] = s.str();
  }
  return files;
}

ExperimentConfig crossover_config(const fs::path& out, bool ambient) {
  ExperimentConfig c;
  c.task = Task::cs;
  c.shape = {8};
  c.noise_sigma = 0.05;
  c.prior.components = 4;
  c.prior.variance = 1.0;
  c.test_count = 50;
  c.seed = 0;
  c.sampler.steps = 200;
  c.sampler.gamma = 1.0;
  c.axis = "m";
  c.values = {1, 2, 4, 6, 8};
  c.train_erasure = 0.8;
  c.model = ambient ? "analytic:gm_ambient" : "analytic:gm";
  c.method = ambient ? Method::adps : Method::dps;
  c.out = out.string();
  return c;
}

}  // namespace

int main() {
  const fs::path scratch = fs::temp_directory_path() / "ambient_acceptance";
  fs::remove_all(scratch);

  run(1, "adjoint suite", 10, [] {
    const auto reports = verify_adjoints(100, 1);
    Outcome o{true, ""};
    double worst = 0.0;
    for (const auto& r : reports) {
      o.pass = o.pass && r.pass;
      worst = std::max(worst, r.estimate);
    }
    o.detail = std::to_string(reports.size()) + " operators x 100 pairs, worst " + fmt(worst) + " < 1e-10";
    return o;
  });

  run(2, "expected operator full rank", 120, [] {
    FullRankOptions t;
    t.seed = 2;
    Outcome o{true, ""};
    double lo = 1e300;
    for (const auto& r : verify_full_rank(t)) {
      o.pass = o.pass && r.pass;
      lo = std::min(lo, r.estimate);
    }
    const OracleReport exact = full_rank_exact_agreement(8, 2, 2.0, 2, 100000, 3);
    o.pass = o.pass && exact.pass;
    o.detail = "n=16 coils {1,2,4} R 2->3, 4->5: min sigma_min " + fmt(lo) + " > 0.01; n=8 MC " + fmt(exact.estimate) +
               " vs exact " + fmt(exact.reference) + " (3se " + fmt(exact.tolerance) + ")";
    return o;
  });

  run(3, "trained ambient denoiser vs posterior oracle", 300, [] {
    MinimizerCheckOptions t;
    t.seed = 7;
    const MinimizerCheckResult r = verify_ambient_minimizer(t);
    return Outcome{r.trained.pass && !r.untrained.pass, "trained deviation " + fmt(r.trained.estimate) +
                                                            " < 0.05, untrained " + fmt(r.untrained.estimate)};
  });

  run(4, "reverse-mode gradients", 30, [] {
    const OracleReport r = verify_gradients(100, 4);
    return Outcome{r.pass, "100 points, worst rel. error " + fmt(r.estimate) + " < 1e-4"};
  });

  run(5, "closed-form posterior recovery", 300, [] {
    const GaussianCs p;
    const Vec truth = p.truth();
    SamplerConfig c;
    c.steps = 100;
    c.gamma = 1.0;
    const GmDenoiser clean(p.prior, p.space);
    MaskSpec mask = make_pixel_mask({4}, 0.0, 0);
    mask.keep = {1, 1, 0, 1};
    const Corruption a_train = Corruption::inpaint(mask);
    const GmAmbientDenoiser amb(p.prior, p.space, a_train);
    Vec dps = Vec::Zero(4), adps = Vec::Zero(4);
    const std::size_t runs = 1000;
    for (std::size_t s = 0; s < runs; ++s) {
      c.seed = s;
      dps += dps_sample(clean, p.problem, {}, c);
      adps += adps_sample(amb, p.problem, a_train, {}, c);
    }
    const double e_dps = (dps / runs - truth).norm() / truth.norm();
    const double e_adps = (adps / runs - truth).norm() / truth.norm();
    return Outcome{e_dps < 0.05 && e_adps < 0.10,
                   "1000 trajectories, DPS " + fmt(e_dps) + " < 0.05, A-DPS " + fmt(e_adps) + " < 0.10"};
  });

  run(6, "reduction identities", 60, [] {
    const GaussianCs p;
    const GmDenoiser d(p.prior, p.space);
    bool same_adps = true, same_uncond = true;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      SamplerConfig c;
      c.steps = 50;
      c.seed = seed;
      std::vector<Vec> a, b;
      dps_sample(d, p.problem, {}, c, [&](std::size_t, double, const Vec& x) { a.push_back(x); });
      adps_sample(d, p.problem, Corruption::identity({4}), {}, c,
                  [&](std::size_t, double, const Vec& x) { b.push_back(x); });
      same_adps = same_adps && a == b;
      c.gamma = 0.0;
      c.allow_any_gamma = true;
      a.clear();
      b.clear();
      dps_sample(d, p.problem, {}, c, [&](std::size_t, double, const Vec& x) { a.push_back(x); });
      sample_uncond(d, {}, c, nullptr, [&](std::size_t, double, const Vec& x) { b.push_back(x); });
      same_uncond = same_uncond && a == b;
    }
    return Outcome{same_adps && same_uncond, std::string("A-DPS(A_train=I) == DPS: ") + (same_adps ? "yes" : "no") +
                                                 ", DPS(gamma=0) == uncond: " + (same_uncond ? "yes" : "no") +
                                                 " (10 seeds, every step)"};
  });

  run(7, "FISTA", 60, [] {
    const FistaConfig defaults;
    const bool stock_defaults = defaults.lambda == 0.001 && defaults.iterations == 100;
    bool monotone = true;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto op = gaussian_cs_operator(64, 24, seed);
      Rng rng(seed);
      const FistaResult r = fista_l1wavelet(rng.complex_normal_vec(24), *op, defaults);
      for (std::size_t k = 6; k < r.objective.size(); ++k) monotone = monotone && r.objective[k] <= r.objective[k - 1];
    }
    const std::size_t n = 256;
    Rng rng(3);
    CVec x = CVec::Zero(n);
    for (std::size_t placed = 0; placed < 5;) {
      const auto i = static_cast<Eigen::Index>(rng.below(n));
      if (x[i] != 0.0) continue;
      x[i] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (1.0 + 2.0 * rng.uniform());
      ++placed;
    }
    haar_inv_inplace(std::span<cplx>(x.data(), n), {n}, max_haar_levels({n}));
    const auto op = gaussian_cs_operator(n, 100, 9);
    FistaConfig c;
    c.lambda = 1e-5;
    c.iterations = 3000;
    const double err = (fista_l1wavelet(op->apply(x), *op, c).x - x).norm() / x.norm();
    return Outcome{stock_defaults && monotone && err < 1e-3,
                   std::string("defaults lambda 0.001 / 100 iterations: ") + (stock_defaults ? "yes" : "no") +
                       ", monotone after 5 iterations: " + (monotone ? "yes" : "no") + ", 5-sparse rel. error " +
                       fmt(err) + " < 1e-3"};
  });

  run(8, "clean vs ambient crossover", 600, [&] {
    const auto dps = run_sweep(crossover_config(scratch / "clean", false));
    const auto adps = run_sweep(crossover_config(scratch / "ambient", true));
    const double lo_dps = dps.front().report.mean().mse, lo_adps = adps.front().report.mean().mse;
    const double hi_dps = dps.back().report.mean().mse, hi_adps = adps.back().report.mean().mse;
    return Outcome{lo_adps < lo_dps && hi_adps > hi_dps,
                   "50 signals, mean MSE at m=1: A-DPS " + fmt(lo_adps) + " < DPS " + fmt(lo_dps) +
                       "; at m=8: A-DPS " + fmt(hi_adps) + " > DPS " + fmt(hi_dps)};
  });

  run(9, "sweep determinism", 600, [&] {
    bool same = true;
    std::size_t files = 0;
    for (bool ambient : {false, true}) {
      const fs::path first = scratch / (ambient ? "ambient" : "clean");
      if (!fs::exists(first)) run_sweep(crossover_config(first, ambient));
      const auto before = read_dir(first);
      const fs::path second = scratch / (ambient ? "ambient_rerun" : "clean_rerun");
      run_sweep(crossover_config(second, ambient));
      run_sweep(crossover_config(first, ambient));
      same = same && read_dir(second) == before && read_dir(first) == before;
      files += before.size();
    }
    return Outcome{same, std::to_string(files) + " files byte-identical across reruns: " + (same ? "yes" : "no")};
  });

  fs::remove_all(scratch);
  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
