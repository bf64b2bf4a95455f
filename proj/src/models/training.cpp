// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/models/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

#include "ambient/operators/linear_op.hpp"

namespace ambient {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (!(final_lr_fraction > 0.0 && final_lr_fraction <= 1.0))
    throw std::invalid_argument("final_lr_fraction must lie in (0, 1]");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw std::invalid_argument("momentum must lie in [0, 1)");
  if (batch_size == 0) throw std::invalid_argument("batch size must be positive");
  if (iterations == 0) throw std::invalid_argument("iteration count must be positive");
  if (precision != DType::f32 && precision != DType::f64) throw std::invalid_argument("precision must be f32 or f64");
  for (double s : sigma_levels)
    if (!(s > 0.0)) throw std::invalid_argument("training noise levels must be positive");
  if (sigma_levels.empty() && !(sigma_lo > 0.0 && sigma_hi >= sigma_lo))
    throw std::invalid_argument("training noise range must satisfy 0 < sigma_lo <= sigma_hi");
}

void TrainConfig::write_config(KeyValues& kv) const {
  kv.set("lr", learning_rate);
  kv.set("lr_final_fraction", final_lr_fraction);
  kv.set("momentum", momentum);
  kv.set("batch", batch_size);
  kv.set("iters", iterations);
  kv.set("train_seed", seed);
  kv.set("delta", policy.delta);
  kv.set("acceleration_step", policy.acceleration_step);
  kv.set("precision", to_string(precision));
  if (!sigma_levels.empty()) {
    std::string list;
    for (double s : sigma_levels) list += (list.empty() ? "" : ",") + format_double(s);
    kv.set("sigma_levels", list);
  }
  kv.set("sigma_lo", sigma_lo);
  kv.set("sigma_hi", sigma_hi);
}

TrainConfig TrainConfig::from_config(const KeyValues& kv) {
  TrainConfig c;
  c.learning_rate = kv.get_double_or("lr", c.learning_rate);
  c.final_lr_fraction = kv.get_double_or("lr_final_fraction", c.final_lr_fraction);
  c.momentum = kv.get_double_or("momentum", c.momentum);
  c.batch_size = kv.get_u64_or("batch", c.batch_size);
  c.iterations = kv.get_u64_or("iters", c.iterations);
  c.seed = kv.get_u64_or("train_seed", c.seed);
  c.policy.delta = kv.get_double_or("delta", 0.0);
  c.policy.acceleration_step = kv.get_double_or("acceleration_step", 0.0);
  const std::string prec = kv.get_or("precision", "f64");
  if (prec == "f32")
    c.precision = DType::f32;
  else if (prec == "f64")
    c.precision = DType::f64;
  else
    throw std::invalid_argument("unknown precision '" + prec + "'");
  if (kv.contains("sigma_levels")) c.sigma_levels = kv.get_doubles("sigma_levels");
  c.sigma_lo = kv.get_double_or("sigma_lo", c.sigma_lo);
  c.sigma_hi = kv.get_double_or("sigma_hi", c.sigma_hi);
  c.validate();
  return c;
}

TrainingDiverged::TrainingDiverged(std::size_t iteration, double loss)
    : std::runtime_error("training diverged at iteration " + std::to_string(iteration) + " (loss " +
                         std::to_string(loss) + ")"),
      iteration_(iteration) {}

std::size_t worker_threads(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("AMBIENT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 1;
}

namespace {

struct Example {
  Vec input;         // corrupted noisy signal, channel layout
  Vec mask;          // network mask channel (may be empty)
  MaskSpec corrupted;
  double sigma = 0.0;
  Vec target;        // A x0
  Vec out_mask;      // diagonal A in channel layout, or empty
  LinearOpPtr op;    // general A, or null
};

Vec channel_mask(const Vec& entries, Field field) {
  if (field == Field::real) return entries;
  Vec out(2 * entries.size());
  for (Eigen::Index i = 0; i < entries.size(); ++i) out[2 * i] = out[2 * i + 1] = entries[i];
  return out;
}

double draw_sigma(const TrainConfig& c, Rng& rng) {
  if (!c.sigma_levels.empty()) return c.sigma_levels[rng.below(c.sigma_levels.size())];
  return std::exp(std::log(c.sigma_lo) + (std::log(c.sigma_hi) - std::log(c.sigma_lo)) * rng.uniform());
}

Vec mask_input(const MlpLayout& layout, const Vec& mask) {
  if (layout.mask_channels == 0) return Vec();
  if (static_cast<std::size_t>(mask.size()) != layout.mask_channels)
    throw std::invalid_argument("mask has " + std::to_string(mask.size()) + " entries, network expects " +
                                std::to_string(layout.mask_channels));
  return mask;
}

struct ChunkResult {
  double loss = 0.0;
  std::vector<Mat> weights;
  std::vector<Vec> biases;
};

ChunkResult chunk_gradient(const MlpParams& params, const std::vector<Example>& batch, const Mat& input,
                           Eigen::Index begin, Eigen::Index end, Field field, double norm) {
  ad::Tape tape;
  const MlpVars vars = record_params(tape, params);
  const Eigen::Index n = end - begin;
  const ad::Var in = tape.constant(input.middleCols(begin, n));
  ad::Var out = mlp_forward(tape, params, vars, in);
  const auto rows = static_cast<Eigen::Index>(params.layout.signal_channels);
  Mat target(rows, n);
  for (Eigen::Index j = 0; j < n; ++j) target.col(j) = batch[static_cast<std::size_t>(begin + j)].target;
  const Example& first = batch[static_cast<std::size_t>(begin)];
  if (first.op) {
    out = tape.linear_map(
        out,
        [&batch, begin, field](Eigen::Index j, const Vec& x) {
          return batch[static_cast<std::size_t>(begin + j)].op->apply_channels(x, field);
        },
        [&batch, begin, field](Eigen::Index j, const Vec& g) {
          return batch[static_cast<std::size_t>(begin + j)].op->adjoint_channels(g, field);
        });
  } else if (first.out_mask.size() > 0) {
    Mat masks(rows, n);
    for (Eigen::Index j = 0; j < n; ++j) masks.col(j) = batch[static_cast<std::size_t>(begin + j)].out_mask;
    out = tape.mul(tape.constant(std::move(masks)), out);
  }
  const ad::Var loss = tape.scale(tape.sum_squares(tape.sub(out, tape.constant(std::move(target)))), norm);
  tape.backward(loss);
  ChunkResult r;
  r.loss = loss.value()(0, 0);
  for (std::size_t l = 0; l < params.layers(); ++l) {
    r.weights.push_back(tape.grad(vars.weights[l]));
    r.biases.push_back(tape.grad(vars.biases[l]).col(0));
  }
  return r;
}

constexpr std::size_t kChunks = 8;

TrainResult train_loop(MlpParams params, const TrainConfig& config, Field field,
                       const std::function<Example(Rng&)>& draw) {
  config.validate();
  params.validate();
  Rng rng(config.seed);
  const std::size_t B = config.batch_size;
  const std::size_t chunks = std::min(B, kChunks);
  const std::size_t threads = std::min(worker_threads(config.threads), chunks);
  const double norm = 1.0 / (static_cast<double>(B) * static_cast<double>(params.layout.signal_channels));

  std::vector<Mat> vel_w;
  std::vector<Vec> vel_b;
  for (std::size_t l = 0; l < params.layers(); ++l) {
    vel_w.push_back(Mat::Zero(params.weights[l].rows(), params.weights[l].cols()));
    vel_b.push_back(Vec::Zero(params.biases[l].size()));
  }

  TrainResult result;
  result.loss_trace.reserve(config.iterations);
  std::vector<Example> batch(B);
  for (std::size_t it = 0; it < config.iterations; ++it) {
    for (auto& ex : batch) ex = draw(rng);
    const auto cols = static_cast<Eigen::Index>(B);
    Mat signals(static_cast<Eigen::Index>(params.layout.signal_channels), cols);
    Mat masks(static_cast<Eigen::Index>(params.layout.mask_channels), cols);
    Vec sigmas(cols);
    for (std::size_t j = 0; j < B; ++j) {
      const auto c = static_cast<Eigen::Index>(j);
      signals.col(c) = batch[j].input;
      if (params.layout.mask_channels > 0) masks.col(c) = mask_input(params.layout, batch[j].mask);
      sigmas[c] = batch[j].sigma;
    }
    const Mat input = mlp_input(params.layout, signals, masks, sigmas);

    std::vector<ChunkResult> parts(chunks);
    auto work = [&](std::size_t worker) {
      for (std::size_t c = worker; c < chunks; c += threads) {
        const auto begin = static_cast<Eigen::Index>(c * B / chunks);
        const auto end = static_cast<Eigen::Index>((c + 1) * B / chunks);
        parts[c] = chunk_gradient(params, batch, input, begin, end, field, norm);
      }
    };
    if (threads <= 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w);
      for (auto& t : pool) t.join();
    }

    double loss = 0.0;
    for (const auto& p : parts) loss += p.loss;
    result.loss_trace.push_back(loss);
    if (!std::isfinite(loss)) throw TrainingDiverged(it, loss);

    const double progress =
        config.iterations > 1 ? static_cast<double>(it) / static_cast<double>(config.iterations - 1) : 0.0;
    const double lr = config.learning_rate * (1.0 - (1.0 - config.final_lr_fraction) * progress);
    for (std::size_t l = 0; l < params.layers(); ++l) {
      Mat gw = parts[0].weights[l];
      Vec gb = parts[0].biases[l];
      for (std::size_t c = 1; c < chunks; ++c) {
        gw += parts[c].weights[l];
        gb += parts[c].biases[l];
      }
      vel_w[l] = config.momentum * vel_w[l] - lr * gw;
      vel_b[l] = config.momentum * vel_b[l] - lr * gb;
      params.weights[l] += vel_w[l];
      params.biases[l] += vel_b[l];
      if (!params.weights[l].allFinite() || !params.biases[l].allFinite())
        throw TrainingDiverged(it, std::numeric_limits<double>::quiet_NaN());
    }
  }
  result.params = std::move(params);
  return result;
}

void check_space(const MlpParams& params, const SignalSpace& space) {
  if (params.layout.signal_channels != space.channels())
    throw std::invalid_argument("network layout has " + std::to_string(params.layout.signal_channels) +
                                " signal channels, data has " + std::to_string(space.channels()));
}

Example draw_inpaint(const InpaintSampler& sampler, const SignalSpace& space, const TrainConfig& config,
                     std::size_t mask_channels, Rng& rng) {
  InpaintSample s = sampler(rng);
  if (s.mask.kind != MaskKind::pixel) throw std::invalid_argument("ambient inpainting needs pixel masks");
  if (static_cast<std::size_t>(s.y0.size()) != space.channels() || s.mask.entries() != space.entries())
    throw std::invalid_argument("inpainting sample does not match the signal space");
  Example ex;
  ex.corrupted = further_corrupt(s.mask, config.policy, rng);
  ex.sigma = draw_sigma(config, rng);
  const Vec noise = rng.normal_vec(space.channels());
  const Vec keep = channel_mask(ex.corrupted.as_vec(), space.field);
  ex.input = keep.cwiseProduct(s.y0 + ex.sigma * noise);
  if (mask_channels > 0) ex.mask = ex.corrupted.as_vec();
  ex.out_mask = channel_mask(s.mask.as_vec(), space.field);
  ex.target = ex.out_mask.cwiseProduct(s.y0);
  return ex;
}

}  // namespace

TrainResult train_clean(const CleanSampler& sampler, const SignalSpace& space, MlpParams init,
                        const TrainConfig& config) {
  check_space(init, space);
  const std::size_t mask_channels = init.layout.mask_channels;
  const auto entries = static_cast<Eigen::Index>(space.entries());
  return train_loop(std::move(init), config, space.field, [&](Rng& rng) {
    Example ex;
    const Vec x0 = sampler(rng);
    if (static_cast<std::size_t>(x0.size()) != space.channels())
      throw std::invalid_argument("clean sample does not match the signal space");
    ex.sigma = draw_sigma(config, rng);
    ex.input = x0 + ex.sigma * rng.normal_vec(space.channels());
    if (mask_channels > 0) ex.mask = Vec::Ones(entries);
    ex.target = x0;
    return ex;
  });
}

TrainResult train_ambient_inpaint(const InpaintSampler& sampler, const SignalSpace& space, MlpParams init,
                                  const TrainConfig& config) {
  if (!(config.policy.delta > 0.0))
    throw std::invalid_argument("ambient training needs extra corruption delta > 0");
  check_space(init, space);
  const std::size_t mask_channels = init.layout.mask_channels;
  return train_loop(std::move(init), config, space.field,
                    [&](Rng& rng) { return draw_inpaint(sampler, space, config, mask_channels, rng); });
}

TrainResult train_ambient_mri(const KspaceSampler& sampler, MlpParams init, const TrainConfig& config) {
  if (!(config.policy.acceleration_step > 0.0))
    throw std::invalid_argument("ambient MRI training needs a positive acceleration step");
  const std::size_t mask_channels = init.layout.mask_channels;
  return train_loop(std::move(init), config, Field::complex, [&](Rng& rng) {
    const KspaceData data = sampler(rng);
    if (data.mask.kind != MaskKind::kspace_line) throw std::invalid_argument("ambient MRI training needs k-space masks");
    Example ex;
    ex.corrupted = further_corrupt(data.mask, config.policy, rng);
    ex.sigma = draw_sigma(config, rng);
    std::vector<CVec> reduced = data.kspace;
    for (auto& z : reduced)
      for (Eigen::Index i = 0; i < z.size(); ++i)
        if (!ex.corrupted.keep[static_cast<std::size_t>(i)]) z[i] = 0.0;
    const auto a_tilde = mri_operator(ex.corrupted, data.coils);
    const CVec noise = rng.complex_normal_vec(shape_size(data.shape()));
    const CVec y_tilde = adjoint_combine(reduced, data.coils) + ex.sigma * a_tilde->apply(noise);
    ex.input = to_channels(y_tilde, Field::complex);
    if (mask_channels > 0) ex.mask = ex.corrupted.as_vec();
    ex.target = to_channels(adjoint_combine(data), Field::complex);
    ex.op = mri_operator(data.mask, data.coils);
    return ex;
  });
}

ObjectiveEstimate ambient_inpaint_objective(const InpaintSampler& sampler, const SignalSpace& space,
                                            const AmbientDenoiseFn& h, const TrainConfig& config, std::size_t samples,
                                            std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("objective estimate needs at least two samples");
  Rng rng(seed);
  std::vector<double> losses;
  losses.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const Example ex = draw_inpaint(sampler, space, config, 0, rng);
    const Vec out = h(ex.input, ex.corrupted, ex.sigma);
    losses.push_back((ex.out_mask.cwiseProduct(out) - ex.target).squaredNorm() /
                     static_cast<double>(space.channels()));
  }
  double mean = 0.0;
  for (double l : losses) mean += l;
  mean /= static_cast<double>(samples);
  double var = 0.0;
  for (double l : losses) var += (l - mean) * (l - mean);
  var /= static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(samples))};
}

}  // namespace ambient
