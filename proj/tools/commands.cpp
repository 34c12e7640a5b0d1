// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>
#include <random>

#include "csv.hpp"
#include "levyfrac/levyfrac.h"

namespace levyfrac::cli {
namespace {

namespace fs = std::filesystem;

using Diagnostics = std::vector<std::pair<std::string, std::string>>;

void check(lf_status s) {
  if (s == LF_OK) return;
  const std::string msg = lf_last_error();
  if (s == LF_ERR_INVALID_ARGUMENT || s == LF_ERR_DOMAIN || s == LF_ERR_IO) throw ConfigError(msg);
  throw NumericalError(std::string(lf_status_name(s)) + ": " + msg);
}

template <class T, void (*D)(T*)>
struct Deleter {
  void operator()(T* p) const { D(p); }
};
using DataPtr = std::unique_ptr<lf_data, Deleter<lf_data, lf_data_destroy>>;
using OperatorPtr = std::unique_ptr<lf_operator, Deleter<lf_operator, lf_operator_destroy>>;
using ReportPtr = std::unique_ptr<lf_report, Deleter<lf_report, lf_report_destroy>>;
using FlightsPtr = std::unique_ptr<lf_flights, Deleter<lf_flights, lf_flights_destroy>>;
using CrossoverPtr = std::unique_ptr<lf_crossover, Deleter<lf_crossover, lf_crossover_destroy>>;

std::string num(double v) { return format_number(v); }

// ---- config readers ------------------------------------------------------------------------

lf_operator_spec read_operator(Config& c) {
  const std::string kind = c.str("operator.kind", "fractional");
  lf_operator_spec s{};
  s.beta = c.num("operator.beta");
  if (kind == "fractional") {
    s.kind = LF_FRACTIONAL;
    if (c.has("operator.lambda")) throw ConfigError("operator.lambda: only valid for the tempered kind");
  } else if (kind == "tempered") {
    s.kind = LF_TEMPERED;
    s.lambda = c.num("operator.lambda");
  } else {
    throw ConfigError("operator.kind: expected \"fractional\" or \"tempered\", got \"" + kind + "\"");
  }
  double coeff = 0.0;
  check(lf_coefficient(s, &coeff));
  return s;
}

struct GridSpec {
  double a, b;
  std::size_t n;
};

GridSpec read_domain(Config& c) {
  GridSpec g{c.num("grid.a", 0.0), c.num("grid.b", 1.0), 0};
  if (!(g.a < g.b)) throw ConfigError("grid.b: must exceed grid.a");
  return g;
}

GridSpec read_grid(Config& c) {
  GridSpec g = read_domain(c);
  g.n = c.u64("grid.n");
  if (g.n < 1) throw ConfigError("grid.n: must be at least 1");
  return g;
}

DataPtr read_data(Config& c, const std::string& section, const std::string& fallback) {
  const std::string name = c.str(section + ".name", fallback);
  std::vector<std::string> keys;
  std::vector<double> values;
  for (const auto& k : c.keys_in(section)) {
    if (k == "name") continue;
    keys.push_back(k);
    values.push_back(c.num(section + "." + k));
  }
  std::vector<const char*> ptrs;
  for (const auto& k : keys) ptrs.push_back(k.c_str());
  lf_data* d = nullptr;
  const lf_status s = lf_data_create(name.c_str(), ptrs.data(), values.data(), keys.size(), &d);
  if (s != LF_OK) throw ConfigError(section + ": " + lf_last_error());
  return DataPtr(d);
}

lf_solver_options read_solver(Config& c) {
  lf_solver_options o = lf_solver_options_default();
  o.tolerance = c.num("solver.tolerance", o.tolerance);
  o.max_iterations = c.u64("solver.max_iterations", o.max_iterations);
  o.tau_max = c.num("solver.tau_max", o.tau_max);
  if (!(o.tolerance > 0.0)) throw ConfigError("solver.tolerance: must be positive");
  return o;
}

struct Cells {
  std::vector<double> lo, hi;
};

Cells read_cells(Config& c) {
  Cells cells{c.list("escape.lo"), c.list("escape.hi")};
  if (cells.lo.empty()) throw ConfigError("escape.lo: at least one interval is required");
  if (cells.lo.size() != cells.hi.size()) throw ConfigError("escape.hi: must have as many entries as escape.lo");
  return cells;
}

std::uint64_t read_seed(Config& c, const RunOptions& opt, const std::string& key) {
  if (opt.seed) c.set(key, std::to_string(*opt.seed));
  return c.u64(key);
}

lf_jump_law read_law(Config& c, double width) {
  const lf_operator_spec op = read_operator(c);
  const std::string fallback = op.kind == LF_FRACTIONAL ? "power_law" : "tempered";
  const std::string kind = c.str("stochastic.law", fallback);
  lf_jump_law law{};
  law.beta = op.beta;
  law.lambda = op.lambda;
  if (kind == "power_law") {
    law.kind = LF_JUMP_POWER_LAW;
    law.lambda = 0.0;
  } else if (kind == "tempered") {
    law.kind = LF_JUMP_TEMPERED;
    if (op.kind != LF_TEMPERED) throw ConfigError("stochastic.law: \"tempered\" needs operator.kind = \"tempered\"");
  } else if (kind == "gaussian") {
    law.kind = LF_JUMP_GAUSSIAN;
  } else {
    throw ConfigError("stochastic.law: expected \"power_law\", \"tempered\" or \"gaussian\"");
  }
  law.r_min = c.num("stochastic.r_min", 1e-3 * width);
  if (law.kind == LF_JUMP_GAUSSIAN) law.sigma = c.num("stochastic.sigma", 1.0);
  const lf_status s = lf_jump_law_info(law, nullptr, nullptr);
  if (s != LF_OK) throw ConfigError(std::string("stochastic: ") + lf_last_error());
  return law;
}

// ---- output --------------------------------------------------------------------------------

std::vector<double> report_vector(const lf_report* r, lf_report_field f) {
  const double* d = nullptr;
  std::size_t n = 0;
  check(lf_report_vector(r, f, &d, &n));
  return std::vector<double>(d, d + n);
}

void write_diagnostics(const fs::path& dir, const Diagnostics& d) {
  CsvWriter w((dir / "diagnostics.csv").string(), {"quantity", "value"});
  for (const auto& [k, v] : d) {
    w << k << v;
    w.end_row();
  }
  w.close();
}

void report_diagnostics(const lf_report* r, Diagnostics& d) {
  lf_report_info info{};
  check(lf_report_info_get(r, &info));
  d.emplace_back("converged", info.converged ? "true" : "false");
  d.emplace_back("residual_norm", num(info.residual_norm));
  d.emplace_back("iterations", std::to_string(info.iterations));
  d.emplace_back("source_error_estimate", num(info.source_error_estimate));
  for (std::size_t i = 0; i < lf_report_warning_count(r); ++i) d.emplace_back("warning", lf_report_warning(r, i));
}

void write_solution(const fs::path& dir, const std::vector<double>& x, const std::vector<double>& p) {
  CsvWriter w((dir / "solution.csv").string(), {"x", "p"});
  for (std::size_t i = 0; i < x.size(); ++i) {
    w << x[i] << p[i];
    w.end_row();
  }
  w.close();
}

void write_history(const fs::path& dir, const lf_report* r) {
  const auto t = report_vector(r, LF_REPORT_TIMES), m = report_vector(r, LF_REPORT_MASS),
             e = report_vector(r, LF_REPORT_ENERGY), q = report_vector(r, LF_REPORT_DISSIPATION);
  CsvWriter w((dir / "history.csv").string(), {"t", "mass", "energy", "dissipation"});
  for (std::size_t i = 0; i < t.size(); ++i) {
    w << t[i] << m[i] << e[i] << (i < q.size() ? q[i] : 0.0);
    w.end_row();
  }
  w.close();
}

// ---- commands ------------------------------------------------------------------------------

struct Job {
  std::function<void(const fs::path&, Diagnostics&)> execute;
};

Job solve_dirichlet(Config& c) {
  const lf_operator_spec spec = read_operator(c);
  const GridSpec g = read_grid(c);
  auto gd = std::make_shared<DataPtr>(read_data(c, "data.g", "zero"));
  auto fd = std::make_shared<DataPtr>(c.keys_in("data.f").empty() ? DataPtr() : read_data(c, "data.f", "zero"));
  const bool transient = c.has("time.T") || c.has("time.tau");
  double t_end = 0.0, tau = 0.0;
  std::shared_ptr<DataPtr> p0;
  if (transient) {
    t_end = c.num("time.T");
    tau = c.num("time.tau");
    p0 = std::make_shared<DataPtr>(read_data(c, "data.p0", "zero"));
  }
  const lf_solver_options so = read_solver(c);
  return {[=](const fs::path& dir, Diagnostics& d) {
    lf_operator* raw = nullptr;
    check(lf_operator_assemble(spec, g.a, g.b, g.n, &raw));
    OperatorPtr op(raw);
    lf_report* rr = nullptr;
    if (transient) {
      check(lf_solve_transient_dirichlet(op.get(), gd->get(), fd->get(), p0->get(), t_end, tau, &so, &rr));
    } else {
      check(lf_solve_steady_dirichlet(op.get(), gd->get(), fd->get(), &so, &rr));
    }
    ReportPtr r(rr);
    for (std::size_t i = 0; i < lf_operator_warning_count(op.get()); ++i)
      d.emplace_back("warning", lf_operator_warning(op.get(), i));
    report_diagnostics(r.get(), d);
    write_solution(dir, report_vector(r.get(), LF_REPORT_NODES), report_vector(r.get(), LF_REPORT_SOLUTION));
    if (transient) {
      write_history(dir, r.get());
      const auto e = report_vector(r.get(), LF_REPORT_ENERGY);
      d.emplace_back("steps", std::to_string(e.size() - 1));
      d.emplace_back("final_energy", num(e.back()));
    }
  }};
}

Job solve_neumann(Config& c) {
  const lf_operator_spec spec = read_operator(c);
  const GridSpec g = read_grid(c);
  auto gd = std::make_shared<DataPtr>(read_data(c, "data.g", "zero"));
  auto fd = std::make_shared<DataPtr>(c.keys_in("data.f").empty() ? DataPtr() : read_data(c, "data.f", "zero"));
  auto p0 = std::make_shared<DataPtr>(read_data(c, "data.p0", c.str("data.p0.name")));
  const double t_end = c.num("time.T"), tau = c.num("time.tau");
  const double collar = c.num("neumann.collar_width", 0.0);
  const lf_solver_options so = read_solver(c);
  return {[=](const fs::path& dir, Diagnostics& d) {
    lf_report* rr = nullptr;
    check(lf_solve_transient_neumann(spec, g.a, g.b, g.n, gd->get(), fd->get(), p0->get(), collar, t_end, tau, &so,
                                     &rr));
    ReportPtr r(rr);
    report_diagnostics(r.get(), d);
    write_solution(dir, report_vector(r.get(), LF_REPORT_NODES), report_vector(r.get(), LF_REPORT_SOLUTION));
    write_history(dir, r.get());
    const auto xf = report_vector(r.get(), LF_REPORT_FLUX_POSITIONS), jf = report_vector(r.get(), LF_REPORT_FLUX);
    CsvWriter w((dir / "flux.csv").string(), {"x", "flux"});
    for (std::size_t i = 0; i < xf.size(); ++i) {
      w << xf[i] << jf[i];
      w.end_row();
    }
    w.close();
    lf_report_info info{};
    check(lf_report_info_get(r.get(), &info));
    const auto m = report_vector(r.get(), LF_REPORT_MASS);
    double drift = 0.0;
    for (double v : m) drift = std::max(drift, std::abs(v - m.front()) / std::abs(m.front()));
    d.emplace_back("reflecting", info.reflecting ? "true" : "false");
    d.emplace_back("flux_at_a", num(info.flux_at_a));
    d.emplace_back("flux_at_b", num(info.flux_at_b));
    d.emplace_back("max_relative_mass_drift", num(drift));
  }};
}

Job escape(Config& c) {
  const lf_operator_spec spec = read_operator(c);
  const GridSpec g = read_grid(c);
  const Cells cells = read_cells(c);
  const lf_solver_options so = read_solver(c);
  return {[=](const fs::path& dir, Diagnostics& d) {
    lf_report* rr = nullptr;
    check(lf_escape_probability(spec, g.a, g.b, g.n, cells.lo.data(), cells.hi.data(), cells.lo.size(), &so, &rr));
    ReportPtr r(rr);
    report_diagnostics(r.get(), d);
    const auto p = report_vector(r.get(), LF_REPORT_SOLUTION);
    write_solution(dir, report_vector(r.get(), LF_REPORT_NODES), p);
    d.emplace_back("min_p", num(*std::min_element(p.begin(), p.end())));
    d.emplace_back("max_p", num(*std::max_element(p.begin(), p.end())));
  }};
}

Job mc_escape(Config& c, const RunOptions& opt) {
  const GridSpec dom = read_domain(c);
  const lf_jump_law law = read_law(c, dom.b - dom.a);
  const Cells cells = read_cells(c);
  std::vector<double> x0;
  if (c.has("grid.n")) {
    const std::size_t n = c.u64("grid.n");
    const double h = (dom.b - dom.a) / static_cast<double>(n + 1);
    for (std::size_t i = 0; i < n; ++i) x0.push_back(dom.a + static_cast<double>(i + 1) * h);
    if (c.has("stochastic.x0")) throw ConfigError("stochastic.x0: give either grid.n or stochastic.x0");
  } else {
    x0 = c.list("stochastic.x0", {0.5 * (dom.a + dom.b)});
  }
  lf_escape_config base{};
  base.a = dom.a;
  base.b = dom.b;
  base.law = law;
  base.zeta = c.num("stochastic.zeta", 1.0);
  base.walkers = c.u64("stochastic.walkers", 100000);
  base.jump_cap = c.u64("stochastic.jump_cap", 10000000);
  base.seed = read_seed(c, opt, "stochastic.seed");
  base.threads = opt.threads;
  return {[=](const fs::path& dir, Diagnostics& d) {
    const std::size_t nc = cells.lo.size();
    CsvWriter sol((dir / "solution.csv").string(), {"x", "p", "stderr"});
    CsvWriter per((dir / "cells.csv").string(), {"x", "lo", "hi", "count", "estimate", "stderr"});
    std::size_t other = 0, capped = 0, on_a = 0, on_b = 0;
    bool flagged = false;
    for (double x : x0) {
      lf_escape_config cfg = base;
      cfg.x0 = x;
      cfg.cell_lo = cells.lo.data();
      cfg.cell_hi = cells.hi.data();
      cfg.cells = nc;
      std::vector<std::size_t> counts(nc);
      std::vector<double> est(nc), se(nc);
      lf_escape_summary s{};
      check(lf_mc_escape(&cfg, counts.data(), est.data(), se.data(), &s));
      std::size_t total = 0;
      for (std::size_t k = 0; k < nc; ++k) {
        total += counts[k];
        per << x << cells.lo[k] << cells.hi[k] << static_cast<double>(counts[k]) << est[k] << se[k];
        per.end_row();
      }
      const double n = static_cast<double>(s.walkers);
      const double p = static_cast<double>(total) / n;
      sol << x << p << std::sqrt(p * (1.0 - p) / n);
      sol.end_row();
      other += s.other;
      capped += s.capped;
      on_a += s.landed_on_a;
      on_b += s.landed_on_b;
      flagged = flagged || s.flagged;
    }
    sol.close();
    per.close();
    d.emplace_back("walkers_per_start", std::to_string(base.walkers));
    d.emplace_back("starts", std::to_string(x0.size()));
    d.emplace_back("landed_outside_cells", std::to_string(other));
    d.emplace_back("capped", std::to_string(capped));
    d.emplace_back("landed_on_a", std::to_string(on_a));
    d.emplace_back("landed_on_b", std::to_string(on_b));
    d.emplace_back("flagged", flagged ? "true" : "false");
  }};
}

Job simulate(Config& c, const RunOptions& opt) {
  const lf_jump_law law = read_law(c, 1.0);
  const double zeta = c.num("stochastic.zeta", 1.0);
  const double t_end = c.num("stochastic.t_end", 1.0);
  const std::size_t walkers = c.u64("stochastic.walkers", 100000);
  const std::size_t dump = c.u64("stochastic.dump", 0);
  const double k_max = c.num("stochastic.k_max", 5.0);
  const double k_step = c.num("stochastic.k_step", 0.25);
  if (!(k_step > 0.0)) throw ConfigError("stochastic.k_step: must be positive");
  const std::uint64_t seed = read_seed(c, opt, "stochastic.seed");
  const unsigned threads = opt.threads;
  return {[=](const fs::path& dir, Diagnostics& d) {
    lf_flights* raw = nullptr;
    check(lf_simulate_flights(law, zeta, t_end, walkers, seed, threads, dump, &raw));
    FlightsPtr f(raw);
    const double* x = nullptr;
    std::size_t n = 0;
    check(lf_flights_endpoints(f.get(), &x, &n));
    CsvWriter sol((dir / "solution.csv").string(), {"walker", "endpoint", "jumps"});
    for (std::size_t w = 0; w < n; ++w) {
      std::size_t jumps = 0;
      check(lf_flights_jump_count(f.get(), w, &jumps));
      sol << static_cast<double>(w) << x[w] << static_cast<double>(jumps);
      sol.end_row();
    }
    sol.close();
    if (lf_flights_dump_count(f.get()) > 0) {
      CsvWriter tr((dir / "trajectories.csv").string(), {"walker_id", "t", "x"});
      for (std::size_t w = 0; w < lf_flights_dump_count(f.get()); ++w) {
        const double *t = nullptr, *p = nullptr;
        std::size_t len = 0;
        check(lf_flights_dump(f.get(), w, &t, &p, &len));
        for (std::size_t i = 0; i < len; ++i) {
          tr << static_cast<double>(w) << t[i] << p[i];
          tr.end_row();
        }
      }
      tr.close();
    }
    CsvWriter cf((dir / "cf.csv").string(), {"k", "empirical_re", "empirical_im", "theory", "abs_error"});
    double worst = 0.0;
    const auto steps = static_cast<long>(std::floor(2.0 * k_max / k_step + 1e-9));
    for (long i = 0; i <= steps; ++i) {
      const double k = -k_max + static_cast<double>(i) * k_step;
      double re = 0.0, im = 0.0, th = 0.0;
      check(lf_empirical_cf(x, n, k, &re, &im));
      check(lf_flight_cf(law, zeta, t_end, k, &th));
      const double e = std::hypot(re - th, im);
      worst = std::max(worst, e);
      cf << k << re << im << th << e;
      cf.end_row();
    }
    cf.close();
    d.emplace_back("walkers", std::to_string(n));
    d.emplace_back("max_cf_error", num(worst));
    d.emplace_back("cf_error_bound", num(5.0 / std::sqrt(static_cast<double>(n))));
  }};
}

Job crossover(Config& c, const RunOptions& opt) {
  lf_crossover_config cfg = lf_crossover_config_default();
  cfg.beta = c.num("operator.beta");
  if (c.has("operator.kind") && c.str("operator.kind") != "tempered")
    throw ConfigError("operator.kind: the crossover experiment uses tempered jumps");
  auto lambdas = std::make_shared<std::vector<double>>(c.list("crossover.lambdas", {0.05, 0.1, 0.2, 0.4}));
  cfg.threshold = c.num("crossover.threshold", cfg.threshold);
  cfg.samples = c.u64("crossover.samples", cfg.samples);
  cfg.r_min = c.num("crossover.r_min", cfg.r_min);
  cfg.m_cap = c.u64("crossover.m_cap", cfg.m_cap);
  cfg.checkpoint_ratio = c.num("crossover.checkpoint_ratio", cfg.checkpoint_ratio);
  cfg.gaussian_control = c.flag("crossover.gaussian_control", false) ? 1 : 0;
  cfg.seed = read_seed(c, opt, "stochastic.seed");
  cfg.threads = opt.threads;
  return {[=](const fs::path& dir, Diagnostics& d) {
    lf_crossover_config run = cfg;
    run.lambdas = lambdas->data();
    run.lambda_count = lambdas->size();
    lf_crossover* raw = nullptr;
    check(lf_crossover_run(&run, &raw));
    CrossoverPtr x(raw);
    const double slope = lf_crossover_slope(x.get());
    CsvWriter sol((dir / "solution.csv").string(), {"lambda", "m_star", "resolved", "fitted_slope"});
    CsvWriter cur((dir / "curves.csv").string(), {"lambda", "m", "ks_distance"});
    for (std::size_t i = 0; i < lf_crossover_count(x.get()); ++i) {
      double lam = 0.0, m = 0.0;
      int ok = 0;
      check(lf_crossover_entry(x.get(), i, &lam, &m, &ok));
      sol << lam << m << static_cast<double>(ok) << slope;
      sol.end_row();
      const double *cm = nullptr, *ks = nullptr;
      std::size_t len = 0;
      check(lf_crossover_curve(x.get(), i, &cm, &ks, &len));
      for (std::size_t q = 0; q < len; ++q) {
        cur << lam << cm[q] << ks[q];
        cur.end_row();
      }
    }
    sol.close();
    cur.close();
    d.emplace_back("fitted_slope", num(slope));
    d.emplace_back("expected_slope", num(-cfg.beta));
  }};
}

Job verify_symbol(Config& c) {
  const int n = static_cast<int>(c.u64("verify.n", 1));
  const auto betas = c.list("verify.betas", {0.3, 0.5, 0.8, 1.2, 1.5, 1.8});
  const auto lambdas = c.list("verify.lambdas", {0.1, 1.0, 10.0});
  std::vector<double> kdef;
  for (int i = 0; i <= 16; ++i) kdef.push_back(0.1 * std::pow(10.0, i / 8.0));
  const auto ks = c.list("verify.k", kdef);
  const double tol = c.num("verify.tolerance", n == 1 ? 1e-6 : 1e-5);
  return {[=](const fs::path& dir, Diagnostics& d) {
    CsvWriter w((dir / "solution.csv").string(),
                {"n", "beta", "lambda", "k", "quadrature", "closed_form", "rel_error"});
    double worst = 0.0;
    std::vector<double> q(ks.size()), cf(ks.size()), rel(ks.size());
    for (double b : betas) {
      for (double l : lambdas) {
        double m = 0.0;
        check(lf_verify_tempered_identity(n, b, l, ks.data(), ks.size(), q.data(), cf.data(), rel.data(), &m));
        worst = std::max(worst, m);
        for (std::size_t i = 0; i < ks.size(); ++i) {
          w << static_cast<double>(n) << b << l << ks[i] << q[i] << cf[i] << rel[i];
          w.end_row();
        }
      }
    }
    w.close();
    d.emplace_back("max_rel_error", num(worst));
    d.emplace_back("tolerance", num(tol));
    if (!(worst <= tol)) throw NumericalError("tempered symbol identity: max relative error " + num(worst) +
                                               " exceeds " + num(tol));
  }};
}

Job verify_energy(Config& c, const RunOptions& opt) {
  const std::size_t m = c.u64("field.m", 256);
  const double length = c.num("field.length", 2.0 * std::numbers::pi);
  const std::size_t modes = c.u64("field.modes", 32);
  const double tol = c.num("field.tolerance", 1e-10);
  const std::uint64_t seed = read_seed(c, opt, "field.seed");
  if (2 * modes >= m) throw ConfigError("field.modes: must be below field.m / 2");
  return {[=](const fs::path& dir, Diagnostics& d) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    std::vector<double> v(m, 0.0), x(m);
    for (std::size_t j = 0; j < m; ++j) x[j] = length * static_cast<double>(j) / static_cast<double>(m);
    for (std::size_t q = 1; q <= modes; ++q) {
      const double a = nd(gen), b = nd(gen), k = 2.0 * std::numbers::pi * static_cast<double>(q) / length;
      for (std::size_t j = 0; j < m; ++j) v[j] += a * std::cos(k * x[j]) + b * std::sin(k * x[j]);
    }
    double e1 = 0.0, e2 = 0.0;
    check(lf_energy_equivalence(v.data(), m, length, &e1, &e2));
    write_solution(dir, x, v);
    const double rel = std::abs(e1 - e2) / std::max(e2, 1e-300);
    d.emplace_back("half_laplacian_energy", num(e1));
    d.emplace_back("gradient_energy", num(e2));
    d.emplace_back("rel_difference", num(rel));
    if (!(rel <= tol)) throw NumericalError("energy identity: relative difference " + num(rel) + " exceeds " + num(tol));
  }};
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"solve-dirichlet", "solve-neumann", "escape",        "mc-escape",
                                                 "simulate",        "crossover",     "verify-symbol", "verify-energy"};
  return names;
}

int run(Config& cfg, const RunOptions& opt) {
  cfg.accept("run");
  const std::string command = cfg.str("command");
  Job job;
  if (command == "solve-dirichlet") {
    job = solve_dirichlet(cfg);
  } else if (command == "solve-neumann") {
    job = solve_neumann(cfg);
  } else if (command == "escape") {
    job = escape(cfg);
  } else if (command == "mc-escape") {
    job = mc_escape(cfg, opt);
  } else if (command == "simulate") {
    job = simulate(cfg, opt);
  } else if (command == "crossover") {
    job = crossover(cfg, opt);
  } else if (command == "verify-symbol") {
    job = verify_symbol(cfg);
  } else if (command == "verify-energy") {
    job = verify_energy(cfg, opt);
  } else {
    throw ConfigError("command: unknown command \"" + command + "\"");
  }
  if (opt.out_dir) cfg.set("output.dir", *opt.out_dir);
  const fs::path dir = cfg.str("output.dir", "out");
  cfg.check_unused();

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("output.dir: cannot create '" + dir.string() + "': " + ec.message());
  {
    std::ofstream os(dir / "manifest.toml", std::ios::trunc);
    os << cfg.manifest({{"version", quote(opt.version)}, {"threads", std::to_string(opt.threads)}});
    if (!os) throw ConfigError("output.dir: cannot write the manifest");
  }
  Diagnostics d;
  d.emplace_back("command", command);
  try {
    job.execute(dir, d);
  } catch (const NumericalError& e) {
    d.emplace_back("status", "failed");
    d.emplace_back("error", e.what());
    write_diagnostics(dir, d);
    throw;
  }
  d.emplace_back("status", "ok");
  write_diagnostics(dir, d);
  return 0;
}

int compare(const std::vector<std::string>& dirs, std::optional<double> tolerance,
            const std::optional<std::string>& out_dir) {
  if (dirs.size() != 2 && dirs.size() != 3) throw ConfigError("compare: expects two or three run directories");
  std::vector<CsvTable> runs;
  for (const auto& d : dirs) {
    CsvTable t = read_csv((fs::path(d) / "solution.csv").string());
    if (!t.has("x") || !t.has("p")) throw ConfigError("compare: '" + d + "/solution.csv' lacks x and p columns");
    runs.push_back(std::move(t));
  }
  const auto& xa = runs[0].columns.at("x");
  double span = 0.0;
  for (double v : xa) span = std::max(span, std::abs(v));
  const double tol_x = 1e-9 * std::max(span, 1.0);
  // Index in `run` of each node of `base`; grid mismatch otherwise.
  auto match = [&](const CsvTable& base, const CsvTable& run, const std::string& name) {
    std::vector<std::size_t> idx;
    const auto& xr = run.columns.at("x");
    for (double x : base.columns.at("x")) {
      const auto it = std::lower_bound(xr.begin(), xr.end(), x - tol_x);
      if (it == xr.end() || std::abs(*it - x) > tol_x)
        throw ConfigError("compare: grid mismatch, node " + num(x) + " is missing from " + name);
      idx.push_back(static_cast<std::size_t>(it - xr.begin()));
    }
    return idx;
  };

  if (dirs.size() == 3) {
    const auto i1 = match(runs[0], runs[1], dirs[1]), i2 = match(runs[0], runs[2], dirs[2]);
    const auto &p0 = runs[0].columns.at("p"), &p1 = runs[1].columns.at("p"), &p2 = runs[2].columns.at("p");
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t i = 0; i < p0.size(); ++i) {
      e1 = std::max(e1, std::abs(p0[i] - p1[i1[i]]));
      e2 = std::max(e2, std::abs(p1[i1[i]] - p2[i2[i]]));
    }
    auto spacing = [](const CsvTable& t) {
      const auto& x = t.columns.at("x");
      return x.size() > 1 ? (x.back() - x.front()) / static_cast<double>(x.size() - 1) : 1.0;
    };
    const double ratio = spacing(runs[0]) / spacing(runs[1]);
    const double order = std::log(e1 / e2) / std::log(ratio);
    std::cout << "coarse_fine_difference = " << num(e1) << "\n"
              << "fine_finest_difference = " << num(e2) << "\n"
              << "refinement_ratio = " << num(ratio) << "\n"
              << "empirical_order = " << num(order) << "\n";
    if (out_dir) {
      fs::create_directories(*out_dir);
      CsvWriter w((fs::path(*out_dir) / "compare.csv").string(), {"quantity", "value"});
      w << "coarse_fine_difference" << num(e1);
      w.end_row();
      w << "fine_finest_difference" << num(e2);
      w.end_row();
      w << "empirical_order" << num(order);
      w.end_row();
      w.close();
    }
    return 0;
  }

  // Nodes of the second run must appear in the first.
  const auto idx = match(runs[1], runs[0], dirs[0]);
  const auto &pa = runs[0].columns.at("p"), &pb = runs[1].columns.at("p"), &xb = runs[1].columns.at("x");
  const bool has_se = runs[1].has("stderr") || runs[0].has("stderr");
  double worst = 0.0, worst_z = 0.0;
  std::unique_ptr<CsvWriter> w;
  if (out_dir) {
    fs::create_directories(*out_dir);
    w = std::make_unique<CsvWriter>((fs::path(*out_dir) / "compare.csv").string(),
                                    std::vector<std::string>{"x", "p_a", "p_b", "abs_diff", "stderr"});
  }
  for (std::size_t i = 0; i < xb.size(); ++i) {
    const double diff = std::abs(pa[idx[i]] - pb[i]);
    double se = 0.0;
    if (runs[1].has("stderr")) se = runs[1].columns.at("stderr")[i];
    if (runs[0].has("stderr")) se = std::hypot(se, runs[0].columns.at("stderr")[idx[i]]);
    worst = std::max(worst, diff);
    if (se > 0.0) worst_z = std::max(worst_z, diff / se);
    if (w) {
      *w << xb[i] << pa[idx[i]] << pb[i] << diff << se;
      w->end_row();
    }
  }
  if (w) w->close();
  std::cout << "nodes = " << xb.size() << "\n" << "max_abs_difference = " << num(worst) << "\n";
  bool ok = !tolerance || worst <= *tolerance;
  if (has_se) {
    std::cout << "max_difference_in_stderr = " << num(worst_z) << "\n"
              << "within_3_stderr = " << (worst_z <= 3.0 ? "true" : "false") << "\n";
  }
  if (tolerance) std::cout << "within_tolerance = " << (ok ? "true" : "false") << "\n";
  return ok ? 0 : 3;
}

}  // namespace levyfrac::cli
