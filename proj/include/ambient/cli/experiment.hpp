// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ambient/cli/config.hpp"
#include "ambient/metrics/metrics.hpp"

namespace ambient {

/// One reconstructed test set. `estimates[i]` is empty for failed samples.
struct Reconstruction {
  Shape shape;
  MetricReport report;
  std::vector<CVec> references;
  std::vector<CVec> estimates;
};

/// Reconstructs the test set of `config` in parallel (AMBIENT_THREADS caps
/// the workers). Sample i draws its signal, masks, noise and sampler stream
/// from seeds derived from (seed, i), so results do not depend on scheduling.
/// Per-sample failures become NaN rows.
Reconstruction reconstruct(const ExperimentConfig& config);

struct SweepPoint {
  double value = 0.0;
  MetricReport report;
};

/// For every value of config.axis writes <out>/metrics_<axis>_<value>.csv and
/// then <out>/curve_<axis>.csv (mean and std per value). The first line of
/// every file is "# config_hash=<hash>". Throws before writing anything when
/// the test set is empty, a value is invalid, or <out> already holds CSV files
/// from a different config hash.
std::vector<SweepPoint> run_sweep(const ExperimentConfig& config);

/// "# config_hash=<hash>" header line of a CSV output, empty when absent.
std::string read_config_hash(const std::filesystem::path& csv);

std::string sweep_metrics_name(const std::string& axis, double value);

}  // namespace ambient
