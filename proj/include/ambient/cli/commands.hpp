// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ambient {

/// Entry point of the `ambient` tool. Subcommands: gen-data, train,
/// reconstruct, sweep, verify, metrics. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ambient
