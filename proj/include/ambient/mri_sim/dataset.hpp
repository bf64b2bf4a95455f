// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ambient/mri_sim/acquisition.hpp"
#include "ambient/numerics/kv_file.hpp"

namespace ambient {

struct DatasetConfig {
  std::size_t count = 0;
  Shape shape{16, 16};
  std::size_t coils = 2;
  double coil_smoothness = 0.6;
  double acceleration = 4.0;
  std::size_t acs_lines = 4;
  std::uint64_t master_seed = 0;
  PhantomParams phantom;

  void validate() const;
  void write_config(KeyValues& kv) const;
  static DatasetConfig from_config(const KeyValues& kv);
};

/// One dataset element: ground-truth image (normalized), coils and the acquisition mask.
struct DatasetItem {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  CVec image;
  CoilMaps coils;
  MaskSpec mask;
  double scale = 1.0;

  KspaceData kspace() const { return acquire(image, coils, mask); }
};

/// Item i is generated from Rng::derive_seed(master_seed, i), so any subset
/// can be regenerated independently. The image is divided by the
/// normalization scale of its own acquisition.
DatasetItem make_item(const DatasetConfig& config, std::size_t index);

/// Writes phantom_%06d.ambt, coils_%06d.ambt, mask_%06d.{ambt,kv} and
/// manifest.kv (dataset parameters, per-item seeds and `config_hash`).
void write_dataset(const std::filesystem::path& dir, const DatasetConfig& config, const std::string& config_hash);

struct Dataset {
  DatasetConfig config;
  std::string config_hash;
  std::vector<DatasetItem> items;
};

Dataset load_dataset(const std::filesystem::path& dir);

std::string item_name(const std::string& prefix, std::size_t index);

}  // namespace ambient
