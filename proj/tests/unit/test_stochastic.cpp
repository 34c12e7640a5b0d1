// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"
#include "quadrature.hpp"
#include "special.hpp"
#include "stochastic.hpp"

using namespace levyfrac;

namespace {

std::vector<double> draw(const JumpLaw& law, std::size_t n, std::uint64_t seed) {
  CounterRng rng(CounterRng::stream_key(seed, 0));
  std::vector<double> x(n);
  for (double& v : x) v = sample_jump(law, rng);
  return x;
}

// 2C int_{r_min}^inf r^(k-1-beta) e^(-lambda r) dr
double moment_by_quadrature(const JumpLaw& law, int k) {
  auto f = [&](double r) { return std::pow(r, k - 1.0 - law.beta) * std::exp(-law.lambda * r); };
  return 2.0 * law.C * (quad::gauss_kronrod(f, law.r_min, 1.0, 1e-15) + quad::gauss_kronrod(f, 1.0, special::kInf, 1e-15));
}

}  // namespace

TEST_CASE("pareto sampler") {
  const JumpLaw law = JumpLaw::power_law(1.5, 0.01);
  CHECK(pareto_quantile(law, 1.0) == 0.01);
  CHECK(pareto_quantile(law, 0.5) > 0.01);

  // |X| against the Pareto CDF, KS at the 1 % level.
  std::vector<double> x = draw(law, 100000, 7);
  std::vector<double> r(x.size());
  std::transform(x.begin(), x.end(), r.begin(), [](double v) { return std::abs(v); });
  std::sort(r.begin(), r.end());
  const double n = static_cast<double>(r.size());
  double d = 0.0;
  CHECK(r.front() >= 0.01);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double cdf = 1.0 - std::pow(0.01 / r[i], 1.5);
    d = std::max({d, std::abs(cdf - i / n), std::abs(cdf - (i + 1) / n)});
  }
  CHECK(d < 1.628 / std::sqrt(n));
  const auto pos = std::count_if(x.begin(), x.end(), [](double v) { return v > 0.0; });
  CHECK(std::abs(pos / n - 0.5) < 3.0 * 0.5 / std::sqrt(n));
}

TEST_CASE("tempered sampler") {
  const JumpLaw law = JumpLaw::tempered(0.8, 0.2, 0.01);
  SUBCASE("second moment") {
    const std::vector<double> x = draw(law, 1000000, 11);
    double s = 0.0, s2 = 0.0;
    for (double v : x) {
      s += v * v;
      s2 += v * v * v * v;
    }
    const double n = static_cast<double>(x.size());
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / n);
    CHECK(std::abs(mean - moment(law, 2)) < 3.0 * se);
  }
  SUBCASE("acceptance rate") {
    const double pareto = quad::gauss_kronrod(
        [&](double r) { return 0.8 * std::pow(0.01, 0.8) * std::pow(r, -1.8) * std::exp(-0.2 * r); }, 0.01, special::kInf,
        1e-14);
    CHECK(law.acceptance_rate() == doctest::Approx(pareto).epsilon(1e-8));
    // Empirical proposal survival.
    CounterRng rng(CounterRng::stream_key(3, 0));
    const JumpLaw base = JumpLaw::power_law(0.8, 0.01);
    std::size_t kept = 0;
    const std::size_t trials = 200000;
    for (std::size_t i = 0; i < trials; ++i) {
      const double r = pareto_quantile(base, rng.uniform());
      if (rng.uniform() < std::exp(-0.2 * r)) ++kept;
    }
    CHECK(std::abs(static_cast<double>(kept) / trials / pareto - 1.0) < 0.01);
  }
  SUBCASE("tail dominated by the tempered envelope") {
    const std::vector<double> x = draw(law, 200000, 5);
    const double n = static_cast<double>(x.size());
    for (double big_r = 0.02; big_r < 100.0; big_r *= 2.0) {
      const double frac = std::count_if(x.begin(), x.end(), [&](double v) { return std::abs(v) > big_r; }) / n;
      const double env = std::exp(-0.2 * big_r) * std::pow(0.01 / big_r, 0.8) / law.acceptance_rate();
      CHECK(frac <= env + 3.0 * std::sqrt(env / n));
    }
  }
}

TEST_CASE("flight clock and characteristic function") {
  const std::size_t n = 100000;
  SUBCASE("poisson jump counts") {
    const FlightBatch fb = simulate_flights(JumpLaw::power_law(1.2, 0.01), 1.0, 1.0, n, 21);
    std::vector<double> obs(7, 0.0);
    for (std::size_t c : fb.jump_counts) obs[std::min<std::size_t>(c, 6)] += 1.0;
    double chi2 = 0.0, tail = 1.0;
    for (int c = 0; c < 7; ++c) {
      double p = std::exp(-1.0) / std::tgamma(c + 1.0);
      if (c == 6) p = tail;
      tail -= p;
      chi2 += (obs[c] - n * p) * (obs[c] - n * p) / (n * p);
    }
    CHECK(chi2 < 16.81);  // 6 degrees of freedom, p = 0.01
  }
  SUBCASE("trajectory shape") {
    CounterRng rng(CounterRng::stream_key(1, 0));
    const Trajectory tr = simulate_flight(JumpLaw::tempered(1.2, 1.0, 0.01), 5.0, 2.0, rng);
    CHECK(tr.times.front() == 0.0);
    CHECK(std::is_sorted(tr.times.begin(), tr.times.end()));
    CHECK(tr.times.back() <= 2.0);
  }
  for (const JumpLaw& law : {JumpLaw::power_law(1.2, 0.01), JumpLaw::tempered(0.8, 0.5, 0.01), JumpLaw::tempered(1.0, 1.0, 0.01)}) {
    CAPTURE(law.describe());
    const FlightBatch fb = simulate_flights(law, 1.0, 1.0, n, 99);
    double worst = 0.0;
    for (double k = -5.0; k <= 5.0 + 1e-12; k += 0.25) {
      worst = std::max(worst, std::abs(empirical_characteristic_function(fb.endpoints, k) -
                                       flight_characteristic_function(law, 1.0, 1.0, k)));
    }
    CHECK(worst <= 5.0 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("strong tempering looks gaussian") {
  const JumpLaw law = JumpLaw::tempered(0.8, 10.0, 0.01);
  const FlightBatch fb = simulate_flights(law, 1000.0, 1.0, 20000, 4);
  const double n = static_cast<double>(fb.endpoints.size());
  const double mean = std::accumulate(fb.endpoints.begin(), fb.endpoints.end(), 0.0) / n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : fb.endpoints) {
    const double d = (v - mean) * (v - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  const double excess = m4 / (m2 * m2) - 3.0;
  // Compound Poisson: excess kurtosis = <X^4> / (zeta t <X^2>^2).
  auto f4 = [&](double r) { return std::pow(r, 3.0 - law.beta) * std::exp(-law.lambda * r); };
  const double x4 = 2.0 * law.C * quad::gauss_kronrod(f4, law.r_min, special::kInf);
  const double expect = x4 / (1000.0 * moment(law, 2) * moment(law, 2));
  CHECK(expect < 0.1);
  CHECK(std::abs(excess - expect) < 3.0 * std::sqrt(24.0 / n));
}

TEST_CASE("mc escape") {
  SUBCASE("whole complement") {
    EscapeConfig cfg;
    cfg.law = JumpLaw::power_law(1.2, 0.001);
    cfg.x0 = 0.3;
    cfg.walkers = 20000;
    cfg.cells = {{-special::kInf, 0.0}, {1.0, special::kInf}};
    const EscapeEstimate e = mc_escape_probability(cfg);
    CHECK(e.counts[0] + e.counts[1] == cfg.walkers);
    CHECK(e.estimate[0] + e.estimate[1] == 1.0);
    CHECK(e.other == 0);
    CHECK(e.capped == 0);
    CHECK_FALSE(e.flagged);
  }
  SUBCASE("symmetry") {
    EscapeConfig cfg;
    cfg.omega = {-1.0, 1.0};
    cfg.x0 = 0.0;
    cfg.law = JumpLaw::tempered(1.5, 0.5, 0.002);
    cfg.walkers = 40000;
    cfg.cells = {{1.0, special::kInf}};
    const EscapeEstimate e = mc_escape_probability(cfg);
    CHECK(std::abs(e.estimate[0] - 0.5) < 3.0 * e.stderr_[0]);
    CHECK(e.mean_jumps > 1.0);
  }
  SUBCASE("overlapping cell") {
    EscapeConfig cfg;
    cfg.law = JumpLaw::power_law(1.2, 0.001);
    cfg.cells = {{0.5, 2.0}};
    CHECK_THROWS_AS(mc_escape_probability(cfg), Error);
  }
}

TEST_CASE("determinism across thread counts") {
  EscapeConfig cfg;
  cfg.law = JumpLaw::power_law(1.2, 0.001);
  cfg.walkers = 5000;
  cfg.seed = 77;
  cfg.cells = {{-special::kInf, -1.0}, {-1.0, 0.0}, {1.0, 2.0}, {2.0, special::kInf}};
  const EscapeEstimate a = mc_escape_probability(cfg);
  cfg.threads = 3;
  const EscapeEstimate b = mc_escape_probability(cfg);
  CHECK(a.counts == b.counts);
  CHECK(a.mean_exit_time == b.mean_exit_time);
  CHECK(std::accumulate(a.counts.begin(), a.counts.end(), std::size_t{0}) == cfg.walkers);

  const FlightBatch f1 = simulate_flights(JumpLaw::tempered(0.8, 0.2, 0.01), 2.0, 1.0, 3000, 5, 1);
  const FlightBatch f4 = simulate_flights(JumpLaw::tempered(0.8, 0.2, 0.01), 2.0, 1.0, 3000, 5, 4);
  CHECK(f1.endpoints == f4.endpoints);
}

TEST_CASE("moments") {
  for (double beta : {0.3, 0.8, 1.5}) {
    for (double lambda : {0.2, 1.0, 5.0}) {
      const JumpLaw law = JumpLaw::tempered(beta, lambda, 0.01);
      for (int k : {2, 3}) {
        CAPTURE(beta);
        CAPTURE(lambda);
        CAPTURE(k);
        CHECK(moment(law, k) == doctest::Approx(moment_by_quadrature(law, k)).epsilon(1e-8));
        CHECK(moment_full_support(law, k) ==
              doctest::Approx(2.0 * law.C * std::pow(lambda, beta - k) * std::tgamma(k - beta)).epsilon(1e-14));
        CHECK(moment(law, k) < moment_full_support(law, k));
      }
    }
  }
  const JumpLaw law = JumpLaw::tempered(0.8, 0.2, 0.01);
  CHECK(moment_full_support(law, 2) ==
        doctest::Approx(2.0 * law.C * std::pow(0.2, -1.2) * std::tgamma(1.2)).epsilon(1e-14));
  CHECK_THROWS_AS(moment(JumpLaw::power_law(1.2, 0.01), 2), Error);
  CHECK_THROWS_AS(moment(law, 4), Error);
}

TEST_CASE("berry esseen bound") {
  const JumpLaw law = JumpLaw::tempered(0.8, 0.2, 0.01);
  const double b = berry_esseen_bound(0.8, 0.2, law.C, 1000.0);
  CHECK(b > 0.0);
  const double via_moments =
      2.5 * moment_full_support(law, 3) / std::pow(moment_full_support(law, 2), 1.5) / std::sqrt(1000.0);
  CHECK(std::abs(b - via_moments) <= 1e-12 * via_moments);
  CHECK(berry_esseen_bound(0.8, 0.2, law.C, 4000.0) == doctest::Approx(0.5 * b).epsilon(1e-14));
  CHECK(berry_esseen_bound(0.8, 0.1, law.C, 1000.0) == doctest::Approx(std::pow(2.0, 0.4) * b).epsilon(1e-14));
  CHECK_THROWS_AS(berry_esseen_bound(0.8, 0.0, law.C, 10.0), Error);
  CHECK_THROWS_AS(berry_esseen_bound(0.8, 0.2, law.C, 0.5), Error);
}

TEST_CASE("ks distance and crossing point") {
  std::vector<double> z = {0.0};
  CHECK(ks_distance_normal(z) == doctest::Approx(0.5));
  const std::vector<std::pair<double, double>> curve = {{1.0, 0.2}, {2.0, 0.1}, {4.0, 0.05}, {8.0, 0.025}};
  CHECK(crossing_point(curve, 0.3) == 1.0);
  CHECK(crossing_point(curve, 0.0707106781186548) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-9));
  CHECK(std::isnan(crossing_point(curve, 0.01)));
}

TEST_CASE("crossover experiment") {
  CrossoverConfig cfg;
  cfg.lambdas = {0.4};
  cfg.samples = 20000;
  cfg.threshold = 0.03;
  const CrossoverReport tight = crossover_experiment(cfg);
  cfg.threshold = 0.05;
  const CrossoverReport loose = crossover_experiment(cfg);
  REQUIRE(tight.resolved[0]);
  REQUIRE(loose.resolved[0]);
  CHECK(loose.m_star[0] <= tight.m_star[0]);

  cfg.m_cap = 4;
  cfg.threshold = 0.03;
  const CrossoverReport capped = crossover_experiment(cfg);
  CHECK_FALSE(capped.resolved[0]);

  CrossoverConfig ctl;
  ctl.gaussian_control = true;
  ctl.samples = 20000;
  const CrossoverReport g = crossover_experiment(ctl);
  for (double m : g.m_star) CHECK(m <= 2.0);
}
