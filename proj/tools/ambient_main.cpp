// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "ambient/cli/commands.hpp"

int main(int argc, char** argv) {
  return ambient::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
