// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/models/checkpoint.hpp"

#include <stdexcept>

#include "ambient/numerics/ambt_io.hpp"

namespace ambient {

namespace {

std::filesystem::path part(const std::filesystem::path& stem, const std::string& suffix) {
  return std::filesystem::path(stem.string() + suffix);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& stem, const MlpParams& params, const KeyValues& extra,
                     DType precision) {
  params.validate();
  if (precision != DType::f32 && precision != DType::f64)
    throw std::invalid_argument("checkpoint precision must be f32 or f64");
  if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
  KeyValues kv = extra;
  std::string widths;
  for (auto w : params.widths) widths += (widths.empty() ? "" : ",") + std::to_string(w);
  kv.set("widths", widths);
  kv.set("signal_channels", params.layout.signal_channels);
  kv.set("mask_channels", params.layout.mask_channels);
  kv.set("sigma_embedding", params.layout.sigma_embedding);
  kv.set("activation", "tanh");
  kv.set("precision", to_string(precision));
  for (std::size_t l = 0; l < params.layers(); ++l) {
    const Mat& w = params.weights[l];
    // Row-major payload.
    std::vector<double> values(static_cast<std::size_t>(w.size()));
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) values[static_cast<std::size_t>(i * w.cols() + j)] = w(i, j);
    const Tensor wt = Tensor::real({static_cast<std::size_t>(w.rows()), static_cast<std::size_t>(w.cols())}, values);
    const Tensor bt = Tensor::from({static_cast<std::size_t>(params.biases[l].size())}, params.biases[l]);
    save_tensor(part(stem, ".w" + std::to_string(l) + ".ambt"), wt.astype(precision));
    save_tensor(part(stem, ".b" + std::to_string(l) + ".ambt"), bt.astype(precision));
  }
  kv.save(part(stem, ".kv"));
}

Checkpoint load_checkpoint(const std::filesystem::path& stem) {
  Checkpoint c;
  c.manifest = KeyValues::load(part(stem, ".kv"));
  MlpParams& p = c.params;
  for (double w : c.manifest.get_doubles("widths")) p.widths.push_back(static_cast<std::size_t>(w));
  p.layout.signal_channels = c.manifest.get_u64("signal_channels");
  p.layout.mask_channels = c.manifest.get_u64("mask_channels");
  p.layout.sigma_embedding = c.manifest.get_bool("sigma_embedding");
  if (c.manifest.get_or("activation", "tanh") != "tanh") throw std::invalid_argument("unknown activation");
  if (p.widths.size() < 2) throw std::invalid_argument("checkpoint manifest has too few widths");
  for (std::size_t l = 0; l + 1 < p.widths.size(); ++l) {
    const Tensor wt = load_tensor(part(stem, ".w" + std::to_string(l) + ".ambt")).astype(DType::f64);
    const Tensor bt = load_tensor(part(stem, ".b" + std::to_string(l) + ".ambt")).astype(DType::f64);
    if (wt.ndim() != 2 || wt.shape()[0] != p.widths[l + 1] || wt.shape()[1] != p.widths[l])
      throw std::invalid_argument("checkpoint layer " + std::to_string(l) + " has the wrong shape");
    const auto values = wt.values<double>();
    Mat w(static_cast<Eigen::Index>(wt.shape()[0]), static_cast<Eigen::Index>(wt.shape()[1]));
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = values[static_cast<std::size_t>(i * w.cols() + j)];
    p.weights.push_back(std::move(w));
    p.biases.push_back(bt.to_vec());
  }
  p.validate();
  return c;
}

}  // namespace ambient
