// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"
#include "config.hpp"
#include "levyfrac/levyfrac.h"

#ifndef LEVYFRAC_DESCRIBE
#define LEVYFRAC_DESCRIBE "unknown"
#endif

int main(int argc, char** argv) {
  using namespace levyfrac::cli;
  const std::string version = std::string(lf_version()) + "-" + LEVYFRAC_DESCRIBE;

  CLI::App app{"levyfrac: fractional and tempered nonlocal diffusion experiments"};
  app.set_version_flag("--version", version);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  unsigned threads = 1;
  app.add_option("--config", config_path, "experiment config (TOML)");
  app.add_option("--seed", seed, "override the random seed");
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--out", out_dir, "output directory (overrides output.dir)");

  auto* cmp = app.add_subcommand("compare", "compare solution.csv of two runs, or three nested runs for the order");
  std::vector<std::string> dirs;
  std::optional<double> tolerance;
  cmp->add_option("dirs", dirs, "run directories")->required()->expected(2, 3);
  cmp->add_option("--tolerance", tolerance, "fail (exit 3) when the max difference exceeds this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*cmp) return compare(dirs, tolerance, out_dir);
    if (config_path.empty()) throw ConfigError("--config: required (or use the compare subcommand)");
    Config cfg = Config::from_file(config_path);
    RunOptions opt;
    opt.out_dir = out_dir;
    opt.seed = seed;
    opt.threads = threads;
    opt.version = version;
    return run(cfg, opt);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
