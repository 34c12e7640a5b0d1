// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#include "levyfrac/levyfrac.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "error.hpp"
#include "exterior.hpp"
#include "operators.hpp"
#include "solvers.hpp"
#include "spectral.hpp"
#include "stochastic.hpp"

using namespace levyfrac;

struct lf_data {
  ExteriorData d;
};

struct lf_operator {
  std::shared_ptr<const DiscreteOperator> op;
};

struct lf_report {
  SolveReport r;
  std::vector<double> nodes, times, mass, energy, dissipation, flux_pos, flux, ext_solution, ext_nodes;
  std::vector<double> solution;
  FluxField fx;
};

struct lf_flights {
  FlightBatch b;
};

struct lf_crossover {
  CrossoverReport r;
  std::vector<std::vector<double>> m, ks;
};

namespace {

thread_local std::string g_last_error;

lf_status status_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument: return LF_ERR_INVALID_ARGUMENT;
    case ErrorCode::domain: return LF_ERR_DOMAIN;
    case ErrorCode::numeric: return LF_ERR_NUMERIC;
    case ErrorCode::convergence: return LF_ERR_CONVERGENCE;
    case ErrorCode::io: return LF_ERR_IO;
  }
  return LF_ERR_INTERNAL;
}

template <class F>
lf_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return LF_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LF_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return LF_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) fail(ErrorCode::invalid_argument, std::string(what) + " must not be null");
}

OperatorSpec to_spec(lf_operator_spec s) {
  if (s.kind == LF_FRACTIONAL) return OperatorSpec::fractional(s.beta);
  if (s.kind == LF_TEMPERED) return OperatorSpec::tempered(s.beta, s.lambda);
  fail(ErrorCode::invalid_argument, "unknown operator kind");
}

JumpLaw to_law(lf_jump_law l) {
  switch (l.kind) {
    case LF_JUMP_POWER_LAW: return JumpLaw::power_law(l.beta, l.r_min);
    case LF_JUMP_TEMPERED: return JumpLaw::tempered(l.beta, l.lambda, l.r_min);
    case LF_JUMP_GAUSSIAN: return JumpLaw::gaussian(l.sigma);
  }
  fail(ErrorCode::invalid_argument, "unknown jump law kind");
}

SolverOptions to_options(const lf_solver_options* o) {
  SolverOptions s;
  if (o) {
    s.tolerance = o->tolerance;
    s.max_iterations = o->max_iterations;
    s.tau_max = o->tau_max;
  }
  return s;
}

Eigen::VectorXd at_nodes(const lf_data* d, const std::vector<Point>& nodes) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nodes.size()));
  if (!d) return v;
  for (std::size_t i = 0; i < nodes.size(); ++i) v[static_cast<Eigen::Index>(i)] = d->d(nodes[i], 0.0);
  return v;
}

ExteriorData zero_or(const lf_data* d) { return d ? d->d : make_data("zero"); }

lf_report* finish(SolveReport&& r, const FluxField* fx = nullptr) {
  auto out = std::make_unique<lf_report>();
  out->r = std::move(r);
  const SolveReport& s = out->r;
  out->solution.assign(s.solution.data(), s.solution.data() + s.solution.size());
  for (const Point& p : s.nodes) out->nodes.push_back(p.x);
  out->times = s.times;
  out->mass = s.mass_history;
  out->energy = s.energy_history;
  out->dissipation = s.dissipation_history;
  out->ext_solution.assign(s.extended_solution.data(), s.extended_solution.data() + s.extended_solution.size());
  for (const Point& p : s.extended_nodes) out->ext_nodes.push_back(p.x);
  if (fx) {
    out->fx = *fx;
    out->flux_pos = fx->positions;
    out->flux = fx->values;
  }
  return out.release();
}

}  // namespace

extern "C" {

const char* lf_last_error(void) { return g_last_error.c_str(); }

const char* lf_version(void) { return "0.1.0"; }

const char* lf_status_name(lf_status status) {
  switch (status) {
    case LF_OK: return "ok";
    case LF_ERR_INVALID_ARGUMENT: return "invalid argument";
    case LF_ERR_DOMAIN: return "domain error";
    case LF_ERR_NUMERIC: return "numerical error";
    case LF_ERR_CONVERGENCE: return "convergence failure";
    case LF_ERR_IO: return "i/o error";
    case LF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

lf_status lf_symbol(lf_operator_spec spec, double k, double* out) {
  return guard([&] {
    need(out, "out");
    const OperatorSpec s = to_spec(spec);
    s.validate();
    *out = s.symbol(k);
  });
}

lf_status lf_coefficient(lf_operator_spec spec, double* out) {
  return guard([&] {
    need(out, "out");
    const OperatorSpec s = to_spec(spec);
    s.validate();
    *out = s.coefficient();
  });
}

size_t lf_data_name_count(void) { return data_names().size(); }

const char* lf_data_name(size_t i) { return i < data_names().size() ? data_names()[i].c_str() : nullptr; }

lf_status lf_data_create(const char* name, const char* const* keys, const double* values, size_t count,
                         lf_data** out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    if (count) {
      need(keys, "keys");
      need(values, "values");
    }
    std::map<std::string, double> params;
    for (size_t i = 0; i < count; ++i) {
      need(keys[i], "key");
      params[keys[i]] = values[i];
    }
    auto d = std::make_unique<lf_data>();
    d->d = make_data(name, params);
    *out = d.release();
  });
}

lf_status lf_data_sum(const lf_data* const* parts, size_t count, lf_data** out) {
  return guard([&] {
    need(parts, "parts");
    need(out, "out");
    std::vector<ExteriorData> v;
    for (size_t i = 0; i < count; ++i) {
      need(parts[i], "part");
      v.push_back(parts[i]->d);
    }
    auto d = std::make_unique<lf_data>();
    d->d = sum_data(v);
    *out = d.release();
  });
}

lf_status lf_data_eval(const lf_data* data, double x, double y, double t, double* out) {
  return guard([&] {
    need(data, "data");
    need(out, "out");
    *out = data->d(Point{x, y}, t);
  });
}

void lf_data_destroy(lf_data* data) { delete data; }

lf_status lf_operator_assemble(lf_operator_spec spec, double a, double b, size_t n, lf_operator** out) {
  return guard([&] {
    need(out, "out");
    auto op = std::make_unique<lf_operator>();
    op->op = std::make_shared<const DiscreteOperator>(assemble(Grid1D(a, b, n), to_spec(spec)));
    *out = op.release();
  });
}

lf_status lf_operator_assemble_hv(lf_operator_spec sx, lf_operator_spec sy, double ax, double bx, size_t nx,
                                  double ay, double by, size_t ny, lf_operator** out) {
  return guard([&] {
    need(out, "out");
    auto op = std::make_unique<lf_operator>();
    op->op = std::make_shared<const DiscreteOperator>(
        assemble_hv(Grid2D{Grid1D(ax, bx, nx), Grid1D(ay, by, ny)}, to_spec(sx), to_spec(sy)));
    *out = op.release();
  });
}

void lf_operator_destroy(lf_operator* op) { delete op; }

size_t lf_operator_size(const lf_operator* op) { return op ? op->op->size() : 0; }

lf_status lf_operator_nodes(const lf_operator* op, double* x, double* y) {
  return guard([&] {
    need(op, "op");
    need(x, "x");
    const auto& nodes = op->op->nodes();
    for (size_t i = 0; i < nodes.size(); ++i) {
      x[i] = nodes[i].x;
      if (y) y[i] = nodes[i].y;
    }
  });
}

lf_status lf_operator_apply(const lf_operator* op, const double* p, const lf_data* g, double t, double* out) {
  return guard([&] {
    need(op, "op");
    need(p, "p");
    need(out, "out");
    const auto n = static_cast<Eigen::Index>(op->op->size());
    const Eigen::VectorXd r = op->op->apply(Eigen::Map<const Eigen::VectorXd>(p, n), zero_or(g), t);
    Eigen::Map<Eigen::VectorXd>(out, n) = r;
  });
}

lf_status lf_operator_write_csv(const lf_operator* op, const char* path) {
  return guard([&] {
    need(op, "op");
    need(path, "path");
    op->op->write_csv(path);
  });
}

size_t lf_operator_warning_count(const lf_operator* op) { return op ? op->op->warnings().size() : 0; }

const char* lf_operator_warning(const lf_operator* op, size_t i) {
  return op && i < op->op->warnings().size() ? op->op->warnings()[i].c_str() : nullptr;
}

lf_solver_options lf_solver_options_default(void) {
  const SolverOptions s;
  return lf_solver_options{s.tolerance, s.max_iterations, s.tau_max};
}

lf_status lf_solve_steady_dirichlet(const lf_operator* op, const lf_data* g, const lf_data* f,
                                    const lf_solver_options* opt, lf_report** out) {
  return guard([&] {
    need(op, "op");
    need(g, "g");
    need(out, "out");
    DirichletProblem prob;
    prob.op = op->op;
    prob.g = g->d;
    if (f) prob.f = f->d;
    *out = finish(solve_steady_dirichlet(prob, to_options(opt)));
  });
}

lf_status lf_solve_transient_dirichlet(const lf_operator* op, const lf_data* g, const lf_data* f, const lf_data* p0,
                                       double t_end, double tau, const lf_solver_options* opt, lf_report** out) {
  return guard([&] {
    need(op, "op");
    need(g, "g");
    need(out, "out");
    DirichletProblem prob;
    prob.op = op->op;
    prob.g = g->d;
    if (f) prob.f = f->d;
    prob.p0 = at_nodes(p0, op->op->nodes());
    *out = finish(solve_transient(prob, t_end, tau, to_options(opt)));
  });
}

lf_status lf_solve_transient_neumann(lf_operator_spec spec, double a, double b, size_t n, const lf_data* g_ext,
                                     const lf_data* f, const lf_data* p0, double collar_width, double t_end,
                                     double tau, const lf_solver_options* opt, lf_report** out) {
  return guard([&] {
    need(out, "out");
    NeumannProblem prob;
    prob.grid = Grid1D(a, b, n);
    prob.spec = to_spec(spec);
    prob.g_ext = zero_or(g_ext);
    if (f) prob.f = f->d;
    std::vector<Point> nodes;
    for (size_t i = 0; i < n; ++i) nodes.push_back(Point{prob.grid.node(i), 0.0});
    prob.p0 = at_nodes(p0, nodes);
    prob.collar_width = collar_width;
    SolveReport r = solve_transient(prob, t_end, tau, to_options(opt));
    const FluxField fx = neumann_flux(prob, r);
    *out = finish(std::move(r), &fx);
  });
}

lf_status lf_escape_probability(lf_operator_spec spec, double a, double b, size_t n, const double* lo,
                                const double* hi, size_t cells, const lf_solver_options* opt, lf_report** out) {
  return guard([&] {
    need(out, "out");
    if (cells) {
      need(lo, "lo");
      need(hi, "hi");
    }
    std::vector<Interval> h;
    for (size_t i = 0; i < cells; ++i) h.push_back(Interval{lo[i], hi[i]});
    *out = finish(escape_probability(Grid1D(a, b, n), to_spec(spec), h, to_options(opt)));
  });
}

void lf_report_destroy(lf_report* report) { delete report; }

lf_status lf_report_info_get(const lf_report* report, lf_report_info* info) {
  return guard([&] {
    need(report, "report");
    need(info, "info");
    const SolveReport& r = report->r;
    *info = lf_report_info{r.residual_norm,        r.iterations,          r.converged ? 1 : 0,
                           r.source_error_estimate, r.reflecting ? 1 : 0, report->fx.at_a,
                           report->fx.at_b};
  });
}

lf_status lf_report_vector(const lf_report* report, lf_report_field field, const double** data, size_t* len) {
  return guard([&] {
    need(report, "report");
    need(data, "data");
    need(len, "len");
    const std::vector<double>* v = nullptr;
    switch (field) {
      case LF_REPORT_SOLUTION: v = &report->solution; break;
      case LF_REPORT_NODES: v = &report->nodes; break;
      case LF_REPORT_TIMES: v = &report->times; break;
      case LF_REPORT_MASS: v = &report->mass; break;
      case LF_REPORT_ENERGY: v = &report->energy; break;
      case LF_REPORT_DISSIPATION: v = &report->dissipation; break;
      case LF_REPORT_FLUX_POSITIONS: v = &report->flux_pos; break;
      case LF_REPORT_FLUX: v = &report->flux; break;
      case LF_REPORT_EXTENDED_SOLUTION: v = &report->ext_solution; break;
      case LF_REPORT_EXTENDED_NODES: v = &report->ext_nodes; break;
    }
    if (!v) fail(ErrorCode::invalid_argument, "unknown report field");
    *data = v->data();
    *len = v->size();
  });
}

size_t lf_report_warning_count(const lf_report* report) { return report ? report->r.warnings.size() : 0; }

const char* lf_report_warning(const lf_report* report, size_t i) {
  return report && i < report->r.warnings.size() ? report->r.warnings[i].c_str() : nullptr;
}

lf_status lf_jump_law_info(lf_jump_law law, double* c, double* acceptance) {
  return guard([&] {
    const JumpLaw l = to_law(law);
    if (c) *c = l.C;
    if (acceptance) *acceptance = l.acceptance_rate();
  });
}

lf_status lf_moment(lf_jump_law law, int order, int full_support, double* out) {
  return guard([&] {
    need(out, "out");
    const JumpLaw l = to_law(law);
    *out = full_support ? moment_full_support(l, order) : moment(l, order);
  });
}

lf_status lf_berry_esseen_bound(double beta, double lambda, double c, double m, double* out) {
  return guard([&] {
    need(out, "out");
    *out = berry_esseen_bound(beta, lambda, c, m);
  });
}

lf_status lf_flight_cf(lf_jump_law law, double zeta, double t, double k, double* out) {
  return guard([&] {
    need(out, "out");
    *out = flight_characteristic_function(to_law(law), zeta, t, k);
  });
}

lf_status lf_empirical_cf(const double* x, size_t n, double k, double* re, double* im) {
  return guard([&] {
    need(x, "x");
    const auto z = empirical_characteristic_function(std::vector<double>(x, x + n), k);
    if (re) *re = z.real();
    if (im) *im = z.imag();
  });
}

lf_status lf_mc_escape(const lf_escape_config* cfg, size_t* counts, double* estimate, double* std_err,
                       lf_escape_summary* summary) {
  return guard([&] {
    need(cfg, "cfg");
    if (cfg->cells) {
      need(cfg->cell_lo, "cell_lo");
      need(cfg->cell_hi, "cell_hi");
    }
    EscapeConfig c;
    c.omega = Interval{cfg->a, cfg->b};
    c.x0 = cfg->x0;
    for (size_t i = 0; i < cfg->cells; ++i) c.cells.push_back(Interval{cfg->cell_lo[i], cfg->cell_hi[i]});
    c.law = to_law(cfg->law);
    c.zeta = cfg->zeta;
    c.walkers = cfg->walkers;
    c.seed = cfg->seed;
    c.threads = cfg->threads ? cfg->threads : 1;
    if (cfg->jump_cap) c.jump_cap = cfg->jump_cap;
    const EscapeEstimate e = mc_escape_probability(c);
    for (size_t i = 0; i < cfg->cells; ++i) {
      if (counts) counts[i] = e.counts[i];
      if (estimate) estimate[i] = e.estimate[i];
      if (std_err) std_err[i] = e.stderr_[i];
    }
    if (summary) {
      *summary = lf_escape_summary{e.walkers,        e.other,      e.capped, e.landed_on_a, e.landed_on_b,
                                   e.mean_exit_time, e.mean_jumps, e.flagged ? 1 : 0};
    }
  });
}

lf_status lf_simulate_flights(lf_jump_law law, double zeta, double t_end, size_t walkers, uint64_t seed,
                              unsigned threads, size_t dump, lf_flights** out) {
  return guard([&] {
    need(out, "out");
    require(zeta > 0.0, "simulate: zeta must be positive");
    require(t_end > 0.0, "simulate: t_end must be positive");
    auto f = std::make_unique<lf_flights>();
    f->b = simulate_flights(to_law(law), zeta, t_end, walkers, seed, threads ? threads : 1, dump);
    *out = f.release();
  });
}

void lf_flights_destroy(lf_flights* f) { delete f; }

lf_status lf_flights_endpoints(const lf_flights* f, const double** x, size_t* len) {
  return guard([&] {
    need(f, "flights");
    need(x, "x");
    need(len, "len");
    *x = f->b.endpoints.data();
    *len = f->b.endpoints.size();
  });
}

lf_status lf_flights_jump_count(const lf_flights* f, size_t walker, size_t* out) {
  return guard([&] {
    need(f, "flights");
    need(out, "out");
    require(walker < f->b.jump_counts.size(), "walker index out of range");
    *out = f->b.jump_counts[walker];
  });
}

size_t lf_flights_dump_count(const lf_flights* f) { return f ? f->b.dumps.size() : 0; }

lf_status lf_flights_dump(const lf_flights* f, size_t i, const double** t, const double** x, size_t* len) {
  return guard([&] {
    need(f, "flights");
    need(t, "t");
    need(x, "x");
    need(len, "len");
    require(i < f->b.dumps.size(), "dump index out of range");
    *t = f->b.dumps[i].times.data();
    *x = f->b.dumps[i].positions.data();
    *len = f->b.dumps[i].times.size();
  });
}

lf_crossover_config lf_crossover_config_default(void) {
  const CrossoverConfig c;
  return lf_crossover_config{c.beta,   nullptr,        0,         c.threshold, c.samples,         c.r_min,
                             c.m_cap, c.checkpoint_ratio, c.seed, c.threads,   c.gaussian_control ? 1 : 0};
}

lf_status lf_crossover_run(const lf_crossover_config* cfg, lf_crossover** out) {
  return guard([&] {
    need(cfg, "cfg");
    need(out, "out");
    CrossoverConfig c;
    c.beta = cfg->beta;
    if (cfg->lambdas) c.lambdas.assign(cfg->lambdas, cfg->lambdas + cfg->lambda_count);
    c.threshold = cfg->threshold;
    c.samples = cfg->samples;
    c.r_min = cfg->r_min;
    c.m_cap = cfg->m_cap;
    c.checkpoint_ratio = cfg->checkpoint_ratio;
    c.seed = cfg->seed;
    c.threads = cfg->threads ? cfg->threads : 1;
    c.gaussian_control = cfg->gaussian_control != 0;
    auto x = std::make_unique<lf_crossover>();
    x->r = crossover_experiment(c);
    for (const auto& curve : x->r.curves) {
      x->m.emplace_back();
      x->ks.emplace_back();
      for (const auto& [m, d] : curve) {
        x->m.back().push_back(m);
        x->ks.back().push_back(d);
      }
    }
    *out = x.release();
  });
}

void lf_crossover_destroy(lf_crossover* c) { delete c; }

size_t lf_crossover_count(const lf_crossover* c) { return c ? c->r.lambda_grid.size() : 0; }

lf_status lf_crossover_entry(const lf_crossover* c, size_t i, double* lambda, double* m_star, int* resolved) {
  return guard([&] {
    need(c, "crossover");
    require(i < c->r.lambda_grid.size(), "crossover index out of range");
    if (lambda) *lambda = c->r.lambda_grid[i];
    if (m_star) *m_star = c->r.m_star[i];
    if (resolved) *resolved = c->r.resolved[i] ? 1 : 0;
  });
}

double lf_crossover_slope(const lf_crossover* c) {
  return c ? c->r.fitted_slope : std::numeric_limits<double>::quiet_NaN();
}

lf_status lf_crossover_curve(const lf_crossover* c, size_t i, const double** m, const double** ks, size_t* len) {
  return guard([&] {
    need(c, "crossover");
    need(m, "m");
    need(ks, "ks");
    need(len, "len");
    require(i < c->m.size(), "crossover index out of range");
    *m = c->m[i].data();
    *ks = c->ks[i].data();
    *len = c->m[i].size();
  });
}

lf_status lf_verify_tempered_identity(int n, double beta, double lambda, const double* k, size_t nk,
                                      double* quadrature, double* closed_form, double* rel_error,
                                      double* max_rel_error) {
  return guard([&] {
    if (nk) need(k, "k");
    OperatorSpec::tempered(beta, lambda, n).validate();
    const IdentityCheck chk = verify_tempered_identity(n, beta, lambda, std::vector<double>(k, k + nk));
    for (size_t i = 0; i < nk; ++i) {
      if (quadrature) quadrature[i] = chk.quadrature[i];
      if (closed_form) closed_form[i] = chk.closed_form[i];
      if (rel_error) rel_error[i] = chk.rel_error[i];
    }
    if (max_rel_error) *max_rel_error = chk.max_rel_error;
  });
}

lf_status lf_energy_equivalence(const double* values, size_t m, double length, double* half_energy,
                                double* grad_energy) {
  return guard([&] {
    need(values, "values");
    PeriodicField f;
    f.length = length;
    f.values.assign(values, values + m);
    const auto [e1, e2] = energy_equivalence_check(f);
    if (half_energy) *half_energy = e1;
    if (grad_energy) *grad_energy = e2;
  });
}

lf_status lf_symbol_apply(lf_operator_spec spec, const double* values, size_t m, double length, double* out) {
  return guard([&] {
    need(values, "values");
    need(out, "out");
    PeriodicField f;
    f.length = length;
    f.values.assign(values, values + m);
    const PeriodicField g = symbol_apply(f, to_spec(spec));
    std::memcpy(out, g.values.data(), m * sizeof(double));
  });
}

}  // extern "C"
