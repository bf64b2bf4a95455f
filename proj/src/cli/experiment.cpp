// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/cli/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <thread>

#include "ambient/baselines/fista.hpp"
#include "ambient/models/checkpoint.hpp"
#include "ambient/models/training.hpp"
#include "ambient/mri_sim/dataset.hpp"

namespace ambient {
namespace {

enum Stream : std::uint64_t { kSignal = 1, kMask, kNoise, kTrainMask, kSampler };

// Everything shared by the samples of one reconstruction run.
struct Context {
  const ExperimentConfig& config;
  SignalSpace space;
  std::optional<GaussianMixturePrior> prior;
  std::optional<Dataset> dataset;
  LinearOpPtr cs_op;
  DenoiserPtr shared;  // clean analytic model or checkpoint
};

struct Case {
  CVec x0;
  LinearOpPtr op;
  CVec y;
  Corruption measured;
  std::optional<Corruption> a_train;
};

Context make_context(const ExperimentConfig& c) {
  Context ctx{c, {c.shape, c.field()}, {}, {}, {}, {}};
  if (c.task == Task::mri) {
    ctx.dataset = load_dataset(c.dataset);
    if (ctx.dataset->items.size() < c.test_count)
      throw std::invalid_argument("dataset holds " + std::to_string(ctx.dataset->items.size()) +
                                  " items, test_count is " + std::to_string(c.test_count));
    ctx.space.shape = ctx.dataset->config.shape;
  } else {
    ctx.prior = c.prior.build(ctx.space.channels());
  }
  if (c.task == Task::cs) ctx.cs_op = gaussian_cs_operator(ctx.space.shape, c.m, Rng::derive_seed(c.seed, 0));
  if (c.method != Method::fista) {
    if (!c.analytic_model()) {
      Checkpoint ck = load_checkpoint(c.model);
      ctx.shared = std::make_shared<MlpDenoiser>(std::move(ck.params), ctx.space);
    } else if (c.model == "analytic:gm") {
      ctx.shared = std::make_shared<GmDenoiser>(*ctx.prior, ctx.space);
    }
  }
  return ctx;
}

Case make_case(const Context& ctx, std::size_t index) {
  const ExperimentConfig& c = ctx.config;
  const Rng base(Rng::derive_seed(c.seed, index + 1));
  const Shape& shape = ctx.space.shape;
  Case k;
  std::optional<CoilMaps> coils;
  if (ctx.dataset) {
    const DatasetItem& item = ctx.dataset->items[index];
    k.x0 = item.image;
    coils = item.coils;
  } else {
    Rng rng = base.split(kSignal);
    k.x0 = from_channels(ctx.prior->sample(rng), Field::real);
  }

  switch (c.task) {
    case Task::cs:
      k.op = ctx.cs_op;
      break;
    case Task::superres:
      k.op = downsample_operator(shape, c.factor);
      break;
    case Task::inpaint: {
      const MaskSpec mask = make_pixel_mask(shape, c.erasure, base.split(kMask).seed());
      k.op = inpaint_operator(mask);
      k.measured = Corruption::inpaint(mask);
      break;
    }
    case Task::mri: {
      const MaskSpec mask = make_kspace_mask(shape, c.acceleration, c.acs_lines, base.split(kMask).seed());
      k.op = mri_operator(mask, *coils);
      k.measured = Corruption::mri(mask, *coils);
      break;
    }
  }
  k.y = k.op->apply(k.x0);
  if (c.noise_sigma > 0.0) {
    Rng rng = base.split(kNoise);
    if (k.op->output_field(ctx.space.field) == Field::complex)
      k.y += c.noise_sigma * rng.complex_normal_vec(k.op->output_size());
    else
      k.y += c.noise_sigma * rng.normal_vec(k.op->output_size()).cast<std::complex<double>>();
  }

  if (c.method == Method::adps) {
    const std::uint64_t s = base.split(kTrainMask).seed();
    if (c.task == Task::mri) {
      const double r = c.train_acceleration > 0.0 ? c.train_acceleration : c.acceleration + 1.0;
      k.a_train = Corruption::mri(make_kspace_mask(shape, r, c.acs_lines, s), *coils);
    } else {
      k.a_train = Corruption::inpaint(make_pixel_mask(shape, c.train_erasure, s));
    }
  }
  return k;
}

Vec run_method(const Context& ctx, const Case& k, std::size_t index) {
  const ExperimentConfig& c = ctx.config;
  if (c.method == Method::fista) return to_channels(fista_l1wavelet(k.y, *k.op, c.fista).x, ctx.space.field);

  DenoiserPtr denoiser = ctx.shared;
  if (!denoiser) {
    const Corruption bound = k.a_train ? *k.a_train : (k.measured.op ? k.measured : Corruption::identity(ctx.space.shape));
    denoiser = std::make_shared<GmAmbientDenoiser>(*ctx.prior, ctx.space, bound);
  }
  SamplerConfig sc = c.sampler;
  sc.seed = Rng::derive_seed(Rng::derive_seed(c.seed, index + 1), kSampler ^ c.sampler.seed);
  const InverseProblem problem{k.op, k.y};
  switch (c.method) {
    case Method::uncond:
      return sample_uncond(*denoiser, c.schedule, sc);
    case Method::dps:
      return dps_sample(*denoiser, problem, c.schedule, sc);
    case Method::adps:
      return adps_sample(*denoiser, problem, *k.a_train, c.schedule, sc);
    case Method::aos:
      return aos_predict(*denoiser, to_channels(k.y, ctx.space.field), k.measured, c.schedule.sigma_min);
    case Method::fista:
      break;
  }
  throw std::logic_error("unhandled method");
}

std::string sample_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sample_%06zu", index);
  return buf;
}

}  // namespace

Reconstruction reconstruct(const ExperimentConfig& config) {
  config.validate();
  if (config.test_count == 0) throw std::invalid_argument("empty test set (test_count = 0)");
  const Context ctx = make_context(config);
  const std::size_t count = config.test_count;

  Reconstruction out;
  out.shape = ctx.space.shape;
  out.references.resize(count);
  out.estimates.resize(count);
  std::vector<std::optional<MetricValues>> values(count);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        const Case k = make_case(ctx, i);
        out.references[i] = k.x0;
        const CVec est = from_channels(run_method(ctx, k, i), ctx.space.field);
        double range = config.data_range;
        if (range == 0.0) range = k.x0.cwiseAbs().maxCoeff();
        values[i] = compute_metrics(k.x0, est, ctx.space.shape, range);
        out.estimates[i] = est;
      } catch (const std::exception&) {
        values[i].reset();
      }
    }
  };
  const std::size_t threads = std::min(worker_threads(0), count);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < count; ++i) {
    if (values[i])
      out.report.add(sample_id(i), *values[i]);
    else
      out.report.add_failure(sample_id(i));
  }
  return out;
}

std::string read_config_hash(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  std::string line;
  if (!std::getline(in, line)) return {};
  const std::string prefix = "# config_hash=";
  if (line.rfind(prefix, 0) != 0) return {};
  return line.substr(prefix.size());
}

std::string sweep_metrics_name(const std::string& axis, double value) {
  return "metrics_" + axis + "_" + format_double(value) + ".csv";
}

std::vector<SweepPoint> run_sweep(const ExperimentConfig& config) {
  if (config.axis.empty()) throw std::invalid_argument("sweep needs an axis");
  if (config.values.empty()) throw std::invalid_argument("sweep needs at least one axis value");
  if (config.test_count == 0) throw std::invalid_argument("empty test set (test_count = 0)");
  for (double v : config.values) config.at(config.axis, v).validate();

  const std::string hash = config.hash();
  const std::filesystem::path dir(config.out);
  if (std::filesystem::exists(dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.path().extension() != ".csv") continue;
      const std::string other = read_config_hash(entry.path());
      if (other != hash)
        throw std::runtime_error("output directory holds " + entry.path().filename().string() +
                                 " from config hash '" + other + "', this sweep is " + hash);
    }
  }

  std::vector<SweepPoint> points;
  for (double v : config.values) points.push_back({v, reconstruct(config.at(config.axis, v)).report});

  std::filesystem::create_directories(dir);
  for (const auto& p : points) {
    std::ofstream f(dir / sweep_metrics_name(config.axis, p.value), std::ios::binary);
    f << "# config_hash=" << hash << "\n";
    p.report.write_csv(f);
    if (!f) throw std::runtime_error("cannot write sweep metrics to " + dir.string());
  }
  std::ofstream curve(dir / ("curve_" + config.axis + ".csv"), std::ios::binary);
  curve << "# config_hash=" << hash << "\n";
  curve << config.axis << ",mse_mean,mse_std,nrmse_mean,nrmse_std,psnr_mean,psnr_std,ssim_mean,ssim_std,failures\n";
  for (const auto& p : points) {
    const MetricValues m = p.report.mean(), s = p.report.stddev();
    curve << format_double(p.value) << ',' << format_double(m.mse) << ',' << format_double(s.mse) << ','
          << format_double(m.nrmse) << ',' << format_double(s.nrmse) << ',' << format_double(m.psnr) << ','
          << format_double(s.psnr) << ',' << format_double(m.ssim) << ',' << format_double(s.ssim) << ','
          << p.report.failures() << "\n";
  }
  if (!curve) throw std::runtime_error("cannot write sweep curve to " + dir.string());
  KeyValues kv = config.to_kv();
  kv.erase("out");
  kv.set("config_hash", hash);
  kv.save(dir / "config.kv");
  return points;
}

}  // namespace ambient
