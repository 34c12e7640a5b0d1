// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"

namespace levyfrac::cli {

/// Solver or verification failure; exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string version;
};

const std::vector<std::string>& command_names();

/// Runs the experiment named by `command`; writes solution.csv, diagnostics.csv and manifest.toml.
int run(Config& cfg, const RunOptions& opt);

/// Node-wise comparison of two runs, or the empirical order from three nested runs.
int compare(const std::vector<std::string>& dirs, std::optional<double> tolerance,
            const std::optional<std::string>& out_dir);

}  // namespace levyfrac::cli
