// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#include "stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "error.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace levyfrac {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Runs fn(begin, end) over contiguous chunks; results are written per index by the caller,
// so the outcome does not depend on the thread count.
template <class F>
void parallel_chunks(std::size_t count, unsigned threads, F&& fn) {
  const std::size_t t = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  if (t == 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + t - 1) / t;
  for (std::size_t w = 0; w < t; ++w) {
    const std::size_t lo = w * chunk, hi = std::min(count, lo + chunk);
    if (lo < hi) pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

double exponential(CounterRng& rng, double rate) { return -std::log(rng.uniform()) / rate; }

void check_law(const JumpLaw& law) {
  if (law.kind == JumpKind::gaussian) {
    require(law.sigma > 0.0, "jump law: sigma must be positive");
    return;
  }
  require_domain(law.beta > 0.0 && law.beta < 2.0, "jump law: beta must lie in (0,2)");
  require(law.r_min > 0.0, "jump law: r_min must be positive");
  if (law.kind == JumpKind::power_law) {
    require(law.lambda == 0.0, "jump law: power law requires lambda = 0");
  } else {
    require_domain(law.lambda > 0.0, "jump law: tempered law requires lambda > 0");
  }
}

}  // namespace

// ---------------------------------------------------------------------------------------------

JumpLaw JumpLaw::power_law(double beta, double r_min) {
  JumpLaw l;
  l.kind = JumpKind::power_law;
  l.beta = beta;
  l.r_min = r_min;
  check_law(l);
  l.C = 0.5 * beta * std::pow(r_min, beta);
  return l;
}

JumpLaw JumpLaw::tempered(double beta, double lambda, double r_min) {
  JumpLaw l;
  l.kind = JumpKind::tempered_power_law;
  l.beta = beta;
  l.lambda = lambda;
  l.r_min = r_min;
  check_law(l);
  l.C = 0.5 / special::power_exp_integral(-beta, lambda, r_min, special::kInf);
  return l;
}

JumpLaw JumpLaw::gaussian(double sigma) {
  JumpLaw l;
  l.kind = JumpKind::gaussian;
  l.sigma = sigma;
  check_law(l);
  return l;
}

double JumpLaw::acceptance_rate() const {
  if (kind != JumpKind::tempered_power_law) return 1.0;
  return beta * std::pow(r_min, beta) * special::power_exp_integral(-beta, lambda, r_min, special::kInf);
}

std::string JumpLaw::describe() const {
  std::ostringstream os;
  switch (kind) {
    case JumpKind::power_law: os << "power_law(beta=" << beta << ", r_min=" << r_min << ")"; break;
    case JumpKind::tempered_power_law:
      os << "tempered(beta=" << beta << ", lambda=" << lambda << ", r_min=" << r_min << ")";
      break;
    case JumpKind::gaussian: os << "gaussian(sigma=" << sigma << ")"; break;
  }
  return os.str();
}

std::uint64_t CounterRng::stream_key(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed + kGolden * mix64(stream + kGolden));
}

CounterRng::result_type CounterRng::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double pareto_quantile(const JumpLaw& law, double u) { return law.r_min * std::pow(u, -1.0 / law.beta); }

double sample_jump(const JumpLaw& law, CounterRng& rng) {
  if (law.kind == JumpKind::gaussian) {
    const double u1 = rng.uniform(), u2 = rng.uniform();
    return law.sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  for (;;) {
    const std::uint64_t bits = rng();
    const double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    const double r = pareto_quantile(law, u);
    // The low bit, unused by the uniform, picks the direction.
    const double signed_r = (bits & 1u) ? r : -r;
    if (law.kind == JumpKind::power_law) return signed_r;
    if (rng.uniform() < std::exp(-law.lambda * r)) return signed_r;
  }
}

Trajectory simulate_flight(const JumpLaw& law, double zeta, double t_end, CounterRng& rng) {
  require(zeta > 0.0, "simulate_flight: zeta must be positive");
  require(t_end > 0.0, "simulate_flight: t_end must be positive");
  Trajectory tr;
  tr.times.push_back(0.0);
  tr.positions.push_back(0.0);
  double t = exponential(rng, zeta);
  while (t <= t_end) {
    tr.times.push_back(t);
    tr.positions.push_back(tr.positions.back() + sample_jump(law, rng));
    t += exponential(rng, zeta);
  }
  return tr;
}

FlightBatch simulate_flights(const JumpLaw& law, double zeta, double t_end, std::size_t walkers, std::uint64_t seed,
                             unsigned threads, std::size_t dump) {
  require(walkers >= 1, "simulate_flights: walkers must be >= 1");
  FlightBatch out;
  out.endpoints.resize(walkers);
  out.jump_counts.resize(walkers);
  out.dumps.resize(std::min(dump, walkers));
  parallel_chunks(walkers, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t w = lo; w < hi; ++w) {
      CounterRng rng(CounterRng::stream_key(seed, w));
      Trajectory tr = simulate_flight(law, zeta, t_end, rng);
      out.endpoints[w] = tr.positions.back();
      out.jump_counts[w] = tr.positions.size() - 1;
      if (w < out.dumps.size()) out.dumps[w] = std::move(tr);
    }
  });
  return out;
}

// ---------------------------------------------------------------------------------------------
// Characteristic functions

double jump_characteristic_function(const JumpLaw& law, double k) {
  check_law(law);
  k = std::abs(k);
  if (k == 0.0) return 1.0;
  if (law.kind == JumpKind::gaussian) return std::exp(-0.5 * law.sigma * law.sigma * k * k);
  const double b = law.beta, lam = law.lambda;
  // int_0^inf (cos kr - 1) w(r) r^(-1-beta) dr in closed form.
  double full;
  if (lam == 0.0) {
    full = b == 1.0 ? -0.5 * std::numbers::pi * k : special::gamma(-b) * std::cos(0.5 * std::numbers::pi * b) * std::pow(k, b);
  } else if (b == 1.0) {
    full = 0.5 * lam * std::log1p(k * k / (lam * lam)) - k * std::atan(k / lam);
  } else {
    full = special::gamma(-b) * (std::real(std::pow(std::complex<double>(lam, k), b)) - std::pow(lam, b));
  }
  // Minus the part below the cutoff, by quadrature.
  auto f = [=](double r) {
    if (r <= 0.0) return 0.0;
    const double s = std::sin(0.5 * k * r) / r;
    return -2.0 * s * s * std::exp(-lam * r) * std::pow(r, 1.0 - b);
  };
  const double near = quad::tanh_sinh(f, 0.0, law.r_min, 1e-13);
  return 1.0 + 2.0 * law.C * (full - near);
}

double flight_characteristic_function(const JumpLaw& law, double zeta, double t, double k) {
  return std::exp(zeta * t * (jump_characteristic_function(law, k) - 1.0));
}

std::complex<double> empirical_characteristic_function(const std::vector<double>& x, double k) {
  require(!x.empty(), "empirical_characteristic_function: empty sample");
  double c = 0.0, s = 0.0;
  for (double v : x) {
    c += std::cos(k * v);
    s += std::sin(k * v);
  }
  const double n = static_cast<double>(x.size());
  return {c / n, s / n};
}

// ---------------------------------------------------------------------------------------------
// Escape probabilities

EscapeEstimate mc_escape_probability(const EscapeConfig& cfg) {
  check_law(cfg.law);
  const double a = cfg.omega.lo, b = cfg.omega.hi;
  require(a < b, "mc_escape: domain requires lo < hi");
  require(cfg.x0 > a && cfg.x0 < b, "mc_escape: x0 must lie inside the domain");
  require(cfg.zeta > 0.0, "mc_escape: zeta must be positive");
  require(cfg.walkers >= 1, "mc_escape: walkers must be >= 1");
  for (const Interval& c : cfg.cells) {
    require(c.lo < c.hi, "mc_escape: cell requires lo < hi");
    require_domain(!(c.lo < b && c.hi > a), "mc_escape: cell overlaps the domain");
  }
  constexpr int kOther = -1, kCapped = -2;
  std::vector<int> landing(cfg.walkers);
  std::vector<signed char> edge(cfg.walkers, 0);
  std::vector<double> exit_time(cfg.walkers), jumps(cfg.walkers);

  parallel_chunks(cfg.walkers, cfg.threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t w = lo; w < hi; ++w) {
      CounterRng rng(CounterRng::stream_key(cfg.seed, w));
      double x = cfg.x0, t = 0.0;
      std::size_t n = 0;
      bool out = false;
      while (n < cfg.jump_cap) {
        t += exponential(rng, cfg.zeta);
        x += sample_jump(cfg.law, rng);
        ++n;
        if (x <= a || x >= b) {
          out = true;
          break;
        }
      }
      exit_time[w] = t;
      jumps[w] = static_cast<double>(n);
      if (!out) {
        landing[w] = kCapped;
        continue;
      }
      // A landing exactly on an endpoint is exterior; it is nudged off the domain and counted.
      if (x == a) {
        x = std::nextafter(a, -special::kInf);
        edge[w] = -1;
      } else if (x == b) {
        x = std::nextafter(b, special::kInf);
        edge[w] = 1;
      }
      landing[w] = kOther;
      for (std::size_t c = 0; c < cfg.cells.size(); ++c) {
        if (x >= cfg.cells[c].lo && x < cfg.cells[c].hi) {
          landing[w] = static_cast<int>(c);
          break;
        }
      }
    }
  });

  EscapeEstimate est;
  est.walkers = cfg.walkers;
  est.counts.assign(cfg.cells.size(), 0);
  double t_sum = 0.0, j_sum = 0.0;
  for (std::size_t w = 0; w < cfg.walkers; ++w) {
    if (landing[w] == kCapped) {
      ++est.capped;
    } else if (landing[w] == kOther) {
      ++est.other;
    } else {
      ++est.counts[static_cast<std::size_t>(landing[w])];
    }
    if (edge[w] < 0) ++est.landed_on_a;
    if (edge[w] > 0) ++est.landed_on_b;
    t_sum += exit_time[w];
    j_sum += jumps[w];
  }
  const double n = static_cast<double>(cfg.walkers);
  for (std::size_t c : est.counts) {
    const double p = static_cast<double>(c) / n;
    est.estimate.push_back(p);
    est.stderr_.push_back(std::sqrt(p * (1.0 - p) / n));
  }
  est.mean_exit_time = t_sum / n;
  est.mean_jumps = j_sum / n;
  est.flagged = static_cast<double>(est.capped) > 1e-4 * n;
  return est;
}

// ---------------------------------------------------------------------------------------------
// Moments and the Berry-Esseen bound

double moment(const JumpLaw& law, int order) {
  check_law(law);
  require(order == 2 || order == 3, "moment: order must be 2 or 3");
  const double k = order;
  if (law.kind == JumpKind::gaussian) {
    return order == 2 ? law.sigma * law.sigma : 2.0 * std::sqrt(2.0 / std::numbers::pi) * std::pow(law.sigma, 3);
  }
  if (law.kind == JumpKind::power_law) {
    fail(ErrorCode::domain, "moment: the power law has an infinite moment of order " + std::to_string(order) +
                                " >= beta");
  }
  return 2.0 * law.C * special::power_exp_integral(k - law.beta, law.lambda, law.r_min, special::kInf);
}

double moment_full_support(const JumpLaw& law, int order) {
  check_law(law);
  require(order == 2 || order == 3, "moment: order must be 2 or 3");
  require_domain(law.kind == JumpKind::tempered_power_law, "moment_full_support: requires a tempered law");
  const double k = order;
  return 2.0 * law.C * std::pow(law.lambda, law.beta - k) * special::gamma(k - law.beta);
}

double berry_esseen_bound(double beta, double lambda, double C, double m) {
  require_domain(beta > 0.0 && beta < 2.0, "berry_esseen_bound: beta must lie in (0,2)");
  require_domain(lambda > 0.0, "berry_esseen_bound: lambda must be positive");
  require(C > 0.0 && m >= 1.0, "berry_esseen_bound: requires C > 0 and m >= 1");
  return 5.0 / (2.0 * std::sqrt(2.0 * C)) * special::gamma(3.0 - beta) / std::pow(special::gamma(2.0 - beta), 1.5) *
         std::pow(lambda, -0.5 * beta) / std::sqrt(m);
}

// ---------------------------------------------------------------------------------------------
// Crossover experiment

double ks_distance_normal(std::vector<double>& sample) {
  require(!sample.empty(), "ks_distance_normal: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = 0.5 * std::erfc(-sample[i] / std::numbers::sqrt2);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double crossing_point(const std::vector<std::pair<double, double>>& curve, double threshold) {
  for (std::size_t c = 0; c < curve.size(); ++c) {
    if (curve[c].second >= threshold) continue;
    if (c == 0) return curve[0].first;
    const auto [m0, d0] = curve[c - 1];
    const auto [m1, d1] = curve[c];
    const double w = (std::log(d0) - std::log(threshold)) / (std::log(d0) - std::log(d1));
    return std::exp(std::log(m0) + w * (std::log(m1) - std::log(m0)));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

CrossoverReport crossover_experiment(const CrossoverConfig& cfg) {
  require(!cfg.lambdas.empty(), "crossover: empty lambda grid");
  require(cfg.threshold > 0.0 && cfg.threshold < 1.0, "crossover: threshold must lie in (0,1)");
  require(cfg.samples >= 100, "crossover: needs at least 100 samples");
  require(cfg.checkpoint_ratio > 1.0, "crossover: checkpoint ratio must exceed 1");
  require(cfg.m_cap >= 1, "crossover: m_cap must be >= 1");

  std::vector<std::size_t> checkpoints;
  for (double m = 1.0; m <= static_cast<double>(cfg.m_cap) * (1.0 + 1e-12); m *= cfg.checkpoint_ratio) {
    const auto c = static_cast<std::size_t>(std::ceil(m - 1e-9));
    if (checkpoints.empty() || c > checkpoints.back()) checkpoints.push_back(c);
  }

  CrossoverReport rep;
  for (double lam : cfg.lambdas) {
    const JumpLaw law = cfg.gaussian_control ? JumpLaw::gaussian(1.0) : JumpLaw::tempered(cfg.beta, lam, cfg.r_min);
    const double sigma = std::sqrt(moment(law, 2));
    // Path i always uses stream i, so every lambda sees the same uniforms.
    std::vector<double> sums(cfg.samples, 0.0);
    std::vector<std::uint64_t> counters(cfg.samples, 0);
    std::vector<double> scaled(cfg.samples);
    std::vector<std::pair<double, double>> curve;
    std::size_t done = 0;
    double m_star = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t m : checkpoints) {
      parallel_chunks(cfg.samples, cfg.threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
          CounterRng rng(CounterRng::stream_key(cfg.seed, i), counters[i]);
          double s = sums[i];
          for (std::size_t j = done; j < m; ++j) s += sample_jump(law, rng);
          sums[i] = s;
          counters[i] = rng.counter();
        }
      });
      done = m;
      const double norm = 1.0 / (sigma * std::sqrt(static_cast<double>(m)));
      for (std::size_t i = 0; i < cfg.samples; ++i) scaled[i] = sums[i] * norm;
      curve.emplace_back(static_cast<double>(m), ks_distance_normal(scaled));
      if (curve.back().second < cfg.threshold) {
        m_star = crossing_point(curve, cfg.threshold);
        break;
      }
    }
    rep.lambda_grid.push_back(lam);
    rep.m_star.push_back(m_star);
    rep.resolved.push_back(!std::isnan(m_star));
    rep.curves.push_back(std::move(curve));
  }

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < rep.lambda_grid.size(); ++i) {
    if (!rep.resolved[i]) continue;
    xs.push_back(std::log(rep.lambda_grid[i]));
    ys.push_back(std::log(rep.m_star[i]));
  }
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    const double den = n * sxx - sx * sx;
    if (den > 0.0) rep.fitted_slope = (n * sxy - sx * sy) / den;
  }
  return rep;
}

}  // namespace levyfrac
