// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/mri_sim/dataset.hpp"

#include <cstdio>
#include <stdexcept>

#include "ambient/numerics/ambt_io.hpp"
#include "ambient/numerics/rng.hpp"
#include "ambient/operators/serialize.hpp"

namespace ambient {

void DatasetConfig::validate() const {
  if (shape.empty() || shape.size() > 2) throw std::invalid_argument("dataset shape must be 1-D or 2-D");
  shape_size(shape);
  if (coils == 0) throw std::invalid_argument("dataset needs at least one coil");
  if (!(acceleration >= 1.0)) throw std::invalid_argument("acceleration must be >= 1");
}

void DatasetConfig::write_config(KeyValues& kv) const {
  kv.set("count", count);
  kv.set("shape", shape_string(shape));
  kv.set("coils", coils);
  kv.set("coil_smoothness", coil_smoothness);
  kv.set("acceleration", acceleration);
  kv.set("acs_lines", acs_lines);
  kv.set("master_seed", master_seed);
}

DatasetConfig DatasetConfig::from_config(const KeyValues& kv) {
  DatasetConfig c;
  c.count = kv.get_u64_or("count", c.count);
  if (kv.contains("shape")) c.shape = parse_shape(kv.get("shape"));
  c.coils = kv.get_u64_or("coils", c.coils);
  c.coil_smoothness = kv.get_double_or("coil_smoothness", c.coil_smoothness);
  c.acceleration = kv.get_double_or("acceleration", c.acceleration);
  c.acs_lines = kv.get_u64_or("acs_lines", c.acs_lines);
  c.master_seed = kv.get_u64_or("master_seed", c.master_seed);
  c.validate();
  return c;
}

std::string item_name(const std::string& prefix, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu", index);
  return prefix + "_" + buf;
}

DatasetItem make_item(const DatasetConfig& config, std::size_t index) {
  config.validate();
  DatasetItem item;
  item.index = index;
  item.seed = Rng::derive_seed(config.master_seed, index);
  const Phantom phantom = make_phantom(config.shape, Rng::derive_seed(item.seed, 0), config.phantom);
  item.coils = make_coil_maps(config.shape, config.coils, config.coil_smoothness, Rng::derive_seed(item.seed, 1));
  item.mask = make_kspace_mask(config.shape, config.acceleration, config.acs_lines, Rng::derive_seed(item.seed, 2));
  const MaskSpec full = make_kspace_mask(config.shape, 1.0, 0, 0);
  const NormalizedKspace norm = normalize(prewhiten(acquire(phantom.image, item.coils, full)));
  item.scale = norm.scale;
  item.image = phantom.image / norm.scale;
  return item;
}

void write_dataset(const std::filesystem::path& dir, const DatasetConfig& config, const std::string& config_hash) {
  config.validate();
  if (config.count == 0) throw std::invalid_argument("dataset count must be positive");
  std::filesystem::create_directories(dir);
  KeyValues manifest;
  config.write_config(manifest);
  manifest.set("config_hash", config_hash);
  for (std::size_t i = 0; i < config.count; ++i) {
    const DatasetItem item = make_item(config, i);
    save_tensor(dir / (item_name("phantom", i) + ".ambt"), Tensor::from(config.shape, item.image));
    save_coils(dir / (item_name("coils", i) + ".ambt"), item.coils);
    save_mask(dir / item_name("mask", i), item.mask);
    manifest.set(item_name("seed", i), item.seed);
    manifest.set(item_name("scale", i), item.scale);
  }
  manifest.save(dir / "manifest.kv");
}

Dataset load_dataset(const std::filesystem::path& dir) {
  const KeyValues manifest = KeyValues::load(dir / "manifest.kv");
  Dataset ds;
  ds.config = DatasetConfig::from_config(manifest);
  ds.config_hash = manifest.get_or("config_hash", "");
  if (ds.config.count == 0) throw std::invalid_argument("dataset at " + dir.string() + " is empty");
  for (std::size_t i = 0; i < ds.config.count; ++i) {
    DatasetItem item;
    item.index = i;
    item.seed = manifest.get_u64(item_name("seed", i));
    item.scale = manifest.get_double(item_name("scale", i));
    item.image = load_tensor(dir / (item_name("phantom", i) + ".ambt"), DType::c128).to_cvec();
    item.coils = load_coils(dir / (item_name("coils", i) + ".ambt"));
    item.mask = load_mask(dir / item_name("mask", i));
    ds.items.push_back(std::move(item));
  }
  return ds;
}

}  // namespace ambient
