// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "solvers.hpp"

namespace levyfrac {

enum class JumpKind { power_law, tempered_power_law, gaussian };

/// Symmetric jump-length law. Magnitudes have density C w(r) r^(-1-beta) on r >= r_min per
/// direction, w = 1 or exp(-lambda r); C normalizes the law. The Gaussian kind is a control.
struct JumpLaw {
  JumpKind kind = JumpKind::power_law;
  double beta = 1.0;
  double lambda = 0.0;
  double r_min = 1e-3;
  double C = 0.0;
  double sigma = 1.0;  // Gaussian control only

  static JumpLaw power_law(double beta, double r_min);
  static JumpLaw tempered(double beta, double lambda, double r_min);
  static JumpLaw gaussian(double sigma = 1.0);

  /// Probability that a Pareto proposal survives the exp(-lambda r) rejection step.
  double acceptance_rate() const;
  std::string describe() const;
};

/// Counter-based generator: output k of stream `key` is SplitMix64 at state key + k*gamma.
/// Streams are addressed by (seed, id) so results do not depend on scheduling.
class CounterRng {
 public:
  using result_type = std::uint64_t;
  explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0) : key_(key), counter_(counter) {}
  static std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream);
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();
  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

/// Pareto inverse CDF: r_min u^(-1/beta).
double pareto_quantile(const JumpLaw& law, double u);
double sample_jump(const JumpLaw& law, CounterRng& rng);

struct Trajectory {
  std::vector<double> times;
  std::vector<double> positions;
};

/// Compound Poisson flight from 0 with exponential(zeta) waiting times, observed on [0, t_end].
Trajectory simulate_flight(const JumpLaw& law, double zeta, double t_end, CounterRng& rng);

struct FlightBatch {
  std::vector<double> endpoints;
  std::vector<std::size_t> jump_counts;
  std::vector<Trajectory> dumps;  // the first few walkers in full
};
FlightBatch simulate_flights(const JumpLaw& law, double zeta, double t_end, std::size_t walkers, std::uint64_t seed,
                             unsigned threads = 1, std::size_t dump = 0);

/// Characteristic function of a single jump (real: the law is symmetric).
double jump_characteristic_function(const JumpLaw& law, double k);
/// exp(zeta t (Phi_0(k) - 1)).
double flight_characteristic_function(const JumpLaw& law, double zeta, double t, double k);
std::complex<double> empirical_characteristic_function(const std::vector<double>& x, double k);

struct EscapeConfig {
  Interval omega{0.0, 1.0};
  double x0 = 0.5;
  std::vector<Interval> cells;  // half-open [lo, hi) pieces of the complement
  JumpLaw law;
  double zeta = 1.0;
  std::size_t walkers = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::size_t jump_cap = 10000000;
};

struct EscapeEstimate {
  std::size_t walkers = 0;
  std::vector<std::size_t> counts;
  std::vector<double> estimate;
  std::vector<double> stderr_;
  std::size_t other = 0;   // landed in none of the cells
  std::size_t capped = 0;  // still inside after jump_cap jumps
  std::size_t landed_on_a = 0;
  std::size_t landed_on_b = 0;
  double mean_exit_time = 0.0;
  double mean_jumps = 0.0;
  bool flagged = false;  // capped walkers above 0.01 %
};

EscapeEstimate mc_escape_probability(const EscapeConfig& cfg);

/// <|X|^k> for k in {2, 3} under the law as sampled (cutoff included).
double moment(const JumpLaw& law, int order);
/// 2 C lambda^(beta-k) Gamma(k-beta): the same integral without the inner cutoff.
double moment_full_support(const JumpLaw& law, int order);
double berry_esseen_bound(double beta, double lambda, double C, double m);

/// Kolmogorov-Smirnov distance between the sample and the standard normal (sample is sorted in place).
double ks_distance_normal(std::vector<double>& sample);

struct CrossoverConfig {
  double beta = 0.8;
  std::vector<double> lambdas = {0.05, 0.1, 0.2, 0.4};
  double threshold = 0.03;
  std::size_t samples = 100000;
  double r_min = 0.01;
  std::size_t m_cap = 1u << 16;
  double checkpoint_ratio = 1.189207115002721;  // 2^(1/4)
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool gaussian_control = false;
};

struct CrossoverReport {
  std::vector<double> lambda_grid;
  std::vector<double> m_star;  // NaN when unresolved
  std::vector<bool> resolved;
  double fitted_slope = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<std::pair<double, double>>> curves;  // (m, KS distance) per lambda
};

CrossoverReport crossover_experiment(const CrossoverConfig& cfg);

/// m* from a KS curve: first crossing below threshold, log-log interpolated. NaN if none.
double crossing_point(const std::vector<std::pair<double, double>>& curve, double threshold);

}  // namespace levyfrac
