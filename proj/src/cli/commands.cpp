// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/cli/commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "ambient/cli/config.hpp"
#include "ambient/cli/experiment.hpp"
#include "ambient/cli/verify.hpp"
#include "ambient/models/checkpoint.hpp"
#include "ambient/models/training.hpp"
#include "ambient/mri_sim/dataset.hpp"
#include "ambient/numerics/ambt_io.hpp"

namespace ambient {
namespace {

struct Common {
  std::string config;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "flat key = value config file");
  cmd->add_option("--set", c.sets, "override, key=value (repeatable)");
}

template <class T>
void set_if(std::vector<std::string>& sets, const std::string& key, const std::optional<T>& value) {
  if (!value) return;
  if constexpr (std::is_same_v<T, std::string>)
    sets.push_back(key + "=" + *value);
  else if constexpr (std::is_floating_point_v<T>)
    sets.push_back(key + "=" + format_double(*value));
  else
    sets.push_back(key + "=" + std::to_string(*value));
}

int report_exit(const std::vector<OracleReport>& reports, std::ostream& out) {
  bool ok = true;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i) out << "\n";
    out << reports[i].to_kv().serialize();
    ok = ok && reports[i].pass;
  }
  return ok ? 0 : 1;
}

int gen_data(const Common& c, std::ostream& out) {
  const KeyValues kv = load_config(c.config, c.sets);
  const DatasetConfig dc = DatasetConfig::from_config(kv);
  const std::string dir = kv.get("out");
  KeyValues canon;
  dc.write_config(canon);
  write_dataset(dir, dc, canon.hash());
  out << "wrote " << dc.count << " items to " << dir << " (config_hash=" << canon.hash() << ")\n";
  return 0;
}

int train(const Common& c, std::ostream& out) {
  const KeyValues kv = load_config(c.config, c.sets);
  const ExperimentConfig ec = ExperimentConfig::from_kv(kv);
  TrainConfig tc = TrainConfig::from_config(kv);
  const std::string kind = kv.get_or("train_kind", "clean");
  const std::string stem = kv.get("checkpoint");
  std::vector<std::size_t> hidden{64, 64};
  if (kv.contains("hidden")) {
    hidden.clear();
    for (double w : kv.get_doubles("hidden")) hidden.push_back(static_cast<std::size_t>(w));
  }

  std::optional<Dataset> data;
  std::optional<GaussianMixturePrior> prior;
  SignalSpace space{ec.shape, ec.field()};
  if (ec.task == Task::mri) {
    data = load_dataset(ec.dataset);
    if (data->items.empty()) throw std::invalid_argument("dataset is empty");
    space.shape = data->config.shape;
  } else {
    prior = ec.prior.build(space.channels());
  }
  const bool ambient = kind != "clean";
  Rng init_rng(Rng::derive_seed(tc.seed, 0x1417));
  const MlpLayout layout{space.channels(), ambient ? space.entries() : 0, true};
  const MlpParams init = MlpParams::init(layout, hidden, init_rng);

  TrainResult r;
  if (kind == "clean") {
    const CleanSampler sampler = [&](Rng& rng) {
      if (data) return to_channels(data->items[rng.below(data->items.size())].image, space.field);
      return prior->sample(rng);
    };
    r = train_clean(sampler, space, init, tc);
  } else if (kind == "ambient_inpaint") {
    if (data) throw std::invalid_argument("ambient_inpaint trains on the toy prior; use ambient_mri for datasets");
    const InpaintSampler sampler = [&](Rng& rng) {
      InpaintSample s;
      const Vec x0 = prior->sample(rng);
      s.mask = make_pixel_mask(space.shape, ec.erasure, rng.next_u64());
      s.y0 = x0.cwiseProduct(s.mask.as_vec());
      return s;
    };
    r = train_ambient_inpaint(sampler, space, init, tc);
  } else if (kind == "ambient_mri") {
    if (!data) throw std::invalid_argument("ambient_mri needs task = mri and a dataset");
    const KspaceSampler sampler = [&](Rng& rng) { return data->items[rng.below(data->items.size())].kspace(); };
    r = train_ambient_mri(sampler, init, tc);
  } else {
    throw std::invalid_argument("unknown train_kind '" + kind + "' (clean, ambient_inpaint, ambient_mri)");
  }

  KeyValues extra;
  extra.set("train_kind", kind);
  extra.set("config_hash", kv.hash());
  extra.set("final_loss", r.loss_trace.empty() ? 0.0 : r.loss_trace.back());
  save_checkpoint(stem, r.params, extra, tc.precision);
  out << "checkpoint " << stem << " (" << r.params.parameter_count() << " parameters, final loss "
      << format_double(extra.get_double("final_loss")) << ")\n";
  return 0;
}

int reconstruct_cmd(const Common& c, std::ostream& out) {
  const ExperimentConfig ec = ExperimentConfig::from_kv(load_config(c.config, c.sets));
  const Reconstruction rec = reconstruct(ec);
  const std::string hash = ec.hash();
  const std::filesystem::path dir(ec.out);
  std::filesystem::create_directories(dir);
  const auto csv = dir / "metrics.csv";
  if (std::filesystem::exists(csv) && read_config_hash(csv) != hash)
    throw std::runtime_error(csv.string() + " belongs to another config hash");
  std::ofstream f(csv, std::ios::binary);
  f << "# config_hash=" << hash << "\n";
  rec.report.write_csv(f);
  for (std::size_t i = 0; i < rec.estimates.size(); ++i) {
    if (rec.estimates[i].size() == 0) continue;
    char name[40];
    std::snprintf(name, sizeof name, "recon_%06zu.ambt", i);
    const CVec& x = rec.estimates[i];
    save_tensor(dir / name, ec.field() == Field::complex ? Tensor::from(rec.shape, x) : Tensor::from(rec.shape, Vec(x.real())));
  }
  const MetricValues m = rec.report.mean();
  out << "reconstructed " << rec.report.size() << " samples (" << rec.report.failures() << " failed): mse "
      << format_double(m.mse) << ", nrmse " << format_double(m.nrmse) << ", psnr " << format_double(m.psnr)
      << ", ssim " << format_double(m.ssim) << "\n";
  return 0;
}

int sweep_cmd(const Common& c, std::ostream& out) {
  const ExperimentConfig ec = ExperimentConfig::from_kv(load_config(c.config, c.sets));
  const auto points = run_sweep(ec);
  for (const auto& p : points) {
    const MetricValues m = p.report.mean();
    out << ec.axis << "=" << format_double(p.value) << " mse " << format_double(m.mse) << " nrmse "
        << format_double(m.nrmse) << " failures " << p.report.failures() << "\n";
  }
  return 0;
}

int metrics_cmd(const std::string& ref_path, const std::string& est_path, double range, std::ostream& out) {
  const Tensor ref = load_tensor(ref_path);
  const Tensor est = load_tensor(est_path);
  if (ref.shape() != est.shape())
    throw std::invalid_argument("shape mismatch: " + shape_string(ref.shape()) + " vs " + shape_string(est.shape()));
  if (range == 0.0) range = ref.to_cvec().cwiseAbs().maxCoeff();
  MetricReport rep;
  rep.add(std::filesystem::path(est_path).stem().string(), compute_metrics(ref, est, range));
  rep.write_csv(out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ambient: diffusion posterior sampling with ambient denoisers", "ambient"};
  app.require_subcommand(1);

  Common gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "generate a synthetic multi-coil dataset");
  add_common(gen_cmd, gen);
  std::optional<std::string> gen_out, gen_shape;
  std::optional<std::size_t> gen_count, gen_coils, gen_acs;
  std::optional<double> gen_r;
  std::optional<std::uint64_t> gen_seed;
  gen_cmd->add_option("--out", gen_out, "dataset directory");
  gen_cmd->add_option("--count", gen_count);
  gen_cmd->add_option("--shape", gen_shape, "e.g. 16x16");
  gen_cmd->add_option("--coils", gen_coils);
  gen_cmd->add_option("--R", gen_r, "acceleration");
  gen_cmd->add_option("--acs", gen_acs, "ACS lines");
  gen_cmd->add_option("--seed", gen_seed, "master seed");

  Common tr;
  auto* train_cmd = app.add_subcommand("train", "train an MLP denoiser (train_kind = clean | ambient_inpaint | ambient_mri)");
  add_common(train_cmd, tr);
  std::optional<std::string> tr_out;
  train_cmd->add_option("--out", tr_out, "checkpoint stem");

  Common rc;
  auto* rec_cmd = app.add_subcommand("reconstruct", "reconstruct a test set and write per-sample metrics");
  add_common(rec_cmd, rc);
  std::optional<std::size_t> rc_steps, rc_iters;
  std::optional<std::string> rc_gamma, rc_sampler, rc_method, rc_out;
  std::optional<std::uint64_t> rc_seed;
  std::optional<double> rc_lambda;
  rec_cmd->add_option("--steps", rc_steps, "sampler steps (NFE)");
  rec_cmd->add_option("--gamma", rc_gamma, "const:<v> or normalized");
  rec_cmd->add_option("--seed", rc_seed, "master seed");
  rec_cmd->add_option("--sampler", rc_sampler, "sde or ode")->check(CLI::IsMember({"sde", "ode"}));
  rec_cmd->add_option("--method", rc_method, "uncond, dps, adps, aos or fista");
  rec_cmd->add_option("--lambda", rc_lambda, "FISTA l1 weight");
  rec_cmd->add_option("--iters", rc_iters, "FISTA iterations");
  rec_cmd->add_option("--out", rc_out, "output directory");

  Common sw;
  auto* sweep = app.add_subcommand("sweep", "reconstruct over an axis (m, factor, p, R, NFE) and write curves");
  add_common(sweep, sw);
  std::optional<std::string> sw_axis, sw_values, sw_out;
  sweep->add_option("--axis", sw_axis);
  sweep->add_option("--values", sw_values, "comma-separated");
  sweep->add_option("--out", sw_out, "output directory");

  auto* verify = app.add_subcommand("verify", "run a verification suite; exit code 1 when a claim fails");
  std::string claim;
  std::optional<std::size_t> v_n;
  std::size_t v_trials = 100000, v_acs = 2, v_iters = 40000;
  std::vector<std::size_t> v_coils{1, 2, 4};
  std::vector<double> v_r{2.0, 4.0};
  std::uint64_t v_seed = 0;
  verify->add_option("claim", claim)->required()->check(CLI::IsMember({"theorem1", "theorem2", "adjoints", "gradients"}));
  verify->add_option("--n", v_n, "signal length (theorem2: 16, theorem1: 8)");
  verify->add_option("--coils", v_coils, "coil counts")->delimiter(',');
  verify->add_option("--R", v_r, "accelerations R (checked as R -> R + 1)")->delimiter(',');
  verify->add_option("--acs", v_acs, "ACS lines");
  verify->add_option("--trials", v_trials, "Monte-Carlo trials, pairs, points or grid size per noise level");
  verify->add_option("--iters", v_iters, "training iterations (theorem1)");
  verify->add_option("--seed", v_seed);

  auto* metrics = app.add_subcommand("metrics", "MSE, NRMSE, PSNR and SSIM between two AMBT tensors");
  std::string m_ref, m_est;
  double m_range = 0.0;
  metrics->add_option("--reference", m_ref)->required();
  metrics->add_option("--estimate", m_est)->required();
  metrics->add_option("--range", m_range, "data range (default: max |reference|)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*gen_cmd) {
      set_if(gen.sets, "out", gen_out);
      set_if(gen.sets, "count", gen_count);
      set_if(gen.sets, "shape", gen_shape);
      set_if(gen.sets, "coils", gen_coils);
      set_if(gen.sets, "acceleration", gen_r);
      set_if(gen.sets, "acs_lines", gen_acs);
      set_if(gen.sets, "master_seed", gen_seed);
      return gen_data(gen, out);
    }
    if (*train_cmd) {
      set_if(tr.sets, "checkpoint", tr_out);
      return train(tr, out);
    }
    if (*rec_cmd) {
      set_if(rc.sets, "steps", rc_steps);
      set_if(rc.sets, "gamma", rc_gamma);
      set_if(rc.sets, "seed", rc_seed);
      if (rc_sampler) rc.sets.push_back(std::string("stochastic=") + (*rc_sampler == "sde" ? "true" : "false"));
      set_if(rc.sets, "method", rc_method);
      set_if(rc.sets, "lambda", rc_lambda);
      set_if(rc.sets, "fista_iters", rc_iters);
      set_if(rc.sets, "out", rc_out);
      return reconstruct_cmd(rc, out);
    }
    if (*sweep) {
      set_if(sw.sets, "axis", sw_axis);
      set_if(sw.sets, "values", sw_values);
      set_if(sw.sets, "out", sw_out);
      return sweep_cmd(sw, out);
    }
    if (*verify) {
      if (claim == "adjoints") return report_exit(verify_adjoints(std::min<std::size_t>(v_trials, 1000), v_seed), out);
      if (claim == "gradients") return report_exit({verify_gradients(std::min<std::size_t>(v_trials, 1000), v_seed)}, out);
      if (claim == "theorem2") {
        FullRankOptions o;
        o.n = v_n.value_or(16);
        o.coils = v_coils;
        o.accelerations = v_r;
        o.acs_lines = v_acs;
        o.trials = v_trials;
        o.seed = v_seed;
        return report_exit(verify_full_rank(o), out);
      }
      MinimizerCheckOptions o;
      o.n = v_n.value_or(8);
      o.iterations = v_iters;
      o.grid_per_sigma = std::min<std::size_t>(v_trials, 1000);
      o.seed = v_seed;
      const MinimizerCheckResult r = verify_ambient_minimizer(o);
      OracleReport control = r.untrained;
      control.claim = "theorem1.untrained_fails";
      control.pass = !r.untrained.pass;
      return report_exit({r.trained, control}, out);
    }
    if (*metrics) return metrics_cmd(m_ref, m_est, m_range, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace ambient
