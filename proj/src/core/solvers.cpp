// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#include "solvers.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <array>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace levyfrac {
namespace {

// 4-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 4> kGlNodes = {0.0694318442029737, 0.3300094782075719, 0.6699905217924281,
                                            0.9305681557970263};
constexpr std::array<double, 4> kGlWeights = {0.1739274225687269, 0.3260725774312731, 0.3260725774312731,
                                              0.1739274225687269};

Eigen::VectorXd eval_on(const ExteriorData& f, const std::vector<Point>& nodes, double t) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nodes.size()));
  if (!f.value) return v;
  for (std::size_t i = 0; i < nodes.size(); ++i) v[static_cast<Eigen::Index>(i)] = f(nodes[i], t);
  return v;
}

// (1/tau) int_{t0}^{t0+tau} of a vector-valued function of time.
template <class F>
Eigen::VectorXd time_average(bool time_independent, double t0, double tau, F&& f) {
  if (time_independent) return f(t0 + tau);
  Eigen::VectorXd acc = kGlWeights[0] * f(t0 + kGlNodes[0] * tau);
  for (std::size_t q = 1; q < 4; ++q) acc += kGlWeights[q] * f(t0 + kGlNodes[q] * tau);
  return acc;
}

Eigen::VectorXd cg_solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs, const Eigen::VectorXd& guess,
                         const SolverOptions& opt, SolveReport* stats) {
  Eigen::ConjugateGradient<Eigen::MatrixXd, Eigen::Lower | Eigen::Upper> cg;
  const auto cap = opt.max_iterations > 0 ? opt.max_iterations : 10 * static_cast<std::size_t>(m.rows());
  cg.setMaxIterations(static_cast<Eigen::Index>(cap));
  cg.setTolerance(opt.tolerance);
  cg.compute(m);
  Eigen::VectorXd x = cg.solveWithGuess(rhs, guess);
  const double bn = rhs.norm();
  const double res = (m * x - rhs).norm() / (bn > 0.0 ? bn : 1.0);
  if (stats) {
    stats->iterations += static_cast<std::size_t>(cg.iterations());
    stats->residual_norm = std::max(stats->residual_norm, res);
  }
  if (cg.info() != Eigen::Success || !(res <= 100.0 * opt.tolerance)) {
    if (stats) stats->converged = false;
    std::ostringstream os;
    os << "conjugate gradients did not converge: relative residual " << res << " after " << cg.iterations()
       << " iterations (cap " << cap << ")";
    fail(ErrorCode::convergence, os.str());
  }
  return x;
}

double cell_volume(const DiscreteOperator& op) {
  double v = op.grid(0).h();
  if (op.dimension() == 2) v *= op.grid(1).h();
  return v;
}

void check_time_grid(double t_end, double tau, const SolverOptions& opt) {
  require(t_end > 0.0, "transient: T must be positive");
  require(tau > 0.0, "transient: tau must be positive");
  require(tau <= opt.tau_max, "transient: tau exceeds the configured cap tau_max");
  const double steps = t_end / tau;
  require(std::abs(steps - std::round(steps)) <= 1e-9 * std::max(1.0, steps), "transient: T/tau must be an integer");
}

void check_problem(const DirichletProblem& prob) {
  require(prob.op != nullptr, "Dirichlet problem: missing operator");
  require(static_cast<bool>(prob.g.value), "Dirichlet problem: missing exterior data g");
}

}  // namespace

SolveReport solve_steady_dirichlet(const DirichletProblem& prob, const SolverOptions& opt) {
  check_problem(prob);
  const DiscreteOperator& op = *prob.op;
  Eigen::MatrixXd s = -op.interior_matrix();
  s.diagonal() += op.diagonal_tail();
  const SourceResult src = op.exterior_source(prob.g);
  const Eigen::VectorXd rhs = src.values + eval_on(prob.f, op.nodes(), 0.0);

  SolveReport rep;
  rep.nodes = op.nodes();
  rep.warnings = op.warnings();
  rep.source_error_estimate = src.error_estimate;
  rep.solution = cg_solve(s, rhs, Eigen::VectorXd::Zero(rhs.size()), opt, &rep);
  rep.mass_history = {cell_volume(op) * rep.solution.sum()};
  rep.energy_history = {cell_volume(op) * rep.solution.squaredNorm()};
  return rep;
}

SolveReport escape_probability(const Grid1D& grid, const OperatorSpec& spec, const std::vector<Interval>& h,
                               const SolverOptions& opt) {
  require(!h.empty(), "escape_probability: H is empty");
  std::vector<ExteriorData> parts;
  for (const Interval& iv : h) {
    require(iv.lo < iv.hi, "escape_probability: interval requires lo < hi");
    require_domain(!(iv.lo < grid.b && iv.hi > grid.a), "escape_probability: H overlaps the domain");
    parts.push_back(make_data("indicator", {{"lo", iv.lo}, {"hi", iv.hi}}));
  }
  DirichletProblem prob;
  prob.op = std::make_shared<const DiscreteOperator>(assemble(grid, spec));
  prob.g = sum_data(parts);
  prob.g.name = "escape-indicator";
  return solve_steady_dirichlet(prob, opt);
}

Eigen::VectorXd step_implicit(const DiscreteOperator& op, const Eigen::VectorXd& prev, double tau,
                              const Eigen::VectorXd& f_k, const Eigen::VectorXd& source_k, const SolverOptions& opt,
                              SolveReport* stats) {
  require(tau > 0.0, "step_implicit: tau must be positive");
  require(tau <= opt.tau_max, "step_implicit: tau exceeds the configured cap tau_max");
  require(static_cast<std::size_t>(prev.size()) == op.size() && f_k.size() == prev.size() &&
              source_k.size() == prev.size(),
          "step_implicit: vector lengths do not match the operator");
  Eigen::MatrixXd m = -op.interior_matrix();
  m.diagonal() += op.diagonal_tail() + Eigen::VectorXd::Constant(prev.size(), 1.0 / tau);
  return cg_solve(m, prev / tau + f_k + source_k, prev, opt, stats);
}

SolveReport solve_transient(const DirichletProblem& prob, double t_end, double tau, const SolverOptions& opt) {
  check_problem(prob);
  check_time_grid(t_end, tau, opt);
  const DiscreteOperator& op = *prob.op;
  require(static_cast<std::size_t>(prob.p0.size()) == op.size(), "transient: p0 length does not match the grid");
  const auto steps = static_cast<std::size_t>(std::llround(t_end / tau));
  const double vol = cell_volume(op);

  Eigen::MatrixXd m = -op.interior_matrix();
  m.diagonal() += op.diagonal_tail() + Eigen::VectorXd::Constant(prob.p0.size(), 1.0 / tau);
  Eigen::MatrixXd gen = -op.interior_matrix();
  gen.diagonal() += op.diagonal_tail();

  SolveReport rep;
  rep.nodes = op.nodes();
  rep.warnings = op.warnings();
  Eigen::VectorXd p = prob.p0;
  auto record = [&](double t, double diss) {
    rep.times.push_back(t);
    rep.mass_history.push_back(vol * p.sum());
    rep.energy_history.push_back(vol * p.squaredNorm());
    rep.dissipation_history.push_back(diss);
    if (opt.keep_trajectory) rep.trajectory.push_back(p);
  };
  record(0.0, 0.0);
  const bool f_const = !prob.f.value || prob.f.time_independent;
  double diss = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t0 = static_cast<double>(k - 1) * tau;
    const Eigen::VectorXd fk = time_average(f_const, t0, tau, [&](double t) { return eval_on(prob.f, op.nodes(), t); });
    double err = 0.0;
    const Eigen::VectorXd sk = time_average(prob.g.time_independent, t0, tau, [&](double t) {
      const SourceResult s = op.exterior_source(prob.g, t);
      err = std::max(err, s.error_estimate);
      return s.values;
    });
    rep.source_error_estimate = std::max(rep.source_error_estimate, err);
    p = cg_solve(m, p / tau + fk + sk, p, opt, &rep);
    diss += tau * vol * p.dot(gen * p);
    record(static_cast<double>(k) * tau, diss);
  }
  rep.solution = p;
  return rep;
}

CollarOperator CollarOperator::build(const Grid1D& grid, const OperatorSpec& spec, double collar_width) {
  grid.validate();
  const double h = grid.h();
  const double w = collar_width > 0.0 ? collar_width : grid.b - grid.a;
  CollarOperator c;
  c.collar = static_cast<std::size_t>(std::max<long long>(1, std::llround(w / h)));
  const double kh = static_cast<double>(c.collar) * h;
  c.extended = Grid1D(grid.a - kh, grid.b + kh, grid.n + 2 * c.collar);
  AssembleOptions ao;
  ao.with_exterior = false;
  c.matrix = assemble(c.extended, spec, ao).interior_matrix();
  c.in_domain.assign(c.extended.n, false);
  for (std::size_t i = c.collar; i < c.collar + grid.n; ++i) c.in_domain[i] = true;
  return c;
}

Eigen::VectorXd CollarOperator::step(const Eigen::VectorXd& prev_ext, double tau, const Eigen::VectorXd& f_domain,
                                     const Eigen::VectorXd& g_collar, const SolverOptions& opt,
                                     SolveReport* stats) const {
  const auto n = static_cast<Eigen::Index>(extended.n);
  require(prev_ext.size() == n && f_domain.size() == n && g_collar.size() == n,
          "collar step: vector lengths do not match the extended grid");
  Eigen::MatrixXd m = -matrix;
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (in_domain[static_cast<std::size_t>(i)]) {
      m(i, i) += 1.0 / tau;
      rhs[i] = prev_ext[i] / tau + f_domain[i];
    } else {
      rhs[i] = -g_collar[i];
    }
  }
  return cg_solve(m, rhs, prev_ext, opt, stats);
}

SolveReport solve_transient(const NeumannProblem& prob, double t_end, double tau, const SolverOptions& opt) {
  prob.grid.validate();
  prob.spec.validate();
  require(prob.spec.n == 1, "Neumann problems are one-dimensional");
  check_time_grid(t_end, tau, opt);
  require(static_cast<std::size_t>(prob.p0.size()) == prob.grid.n, "transient: p0 length does not match the grid");
  const CollarOperator col = CollarOperator::build(prob.grid, prob.spec, prob.collar_width);
  const auto n = static_cast<Eigen::Index>(col.extended.n);
  const auto k0 = static_cast<Eigen::Index>(col.collar);
  const auto nd = static_cast<Eigen::Index>(prob.grid.n);
  const double h = prob.grid.h();
  std::vector<Point> ext_nodes;
  for (std::size_t i = 0; i < col.extended.n; ++i) ext_nodes.push_back({col.extended.node(i), 0.0});

  SolveReport rep;
  rep.nodes.assign(ext_nodes.begin() + k0, ext_nodes.begin() + k0 + nd);
  rep.extended_nodes = ext_nodes;
  const bool g_given = static_cast<bool>(prob.g_ext.value);
  rep.reflecting = !g_given || prob.g_ext.name == "zero";

  // Masks keep forcing on the domain and exterior data on the collar.
  auto domain_only = [&](Eigen::VectorXd v) {
    for (Eigen::Index i = 0; i < n; ++i)
      if (!col.in_domain[static_cast<std::size_t>(i)]) v[i] = 0.0;
    return v;
  };
  auto collar_only = [&](Eigen::VectorXd v) {
    for (Eigen::Index i = 0; i < n; ++i)
      if (col.in_domain[static_cast<std::size_t>(i)]) v[i] = 0.0;
    return v;
  };
  if (g_given && !rep.reflecting) {
    rep.reflecting = collar_only(eval_on(prob.g_ext, ext_nodes, 0.0)).cwiseAbs().maxCoeff() == 0.0 &&
                     prob.g_ext.time_independent;
  }

  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  p.segment(k0, nd) = prob.p0;
  auto record = [&](double t, double diss) {
    const Eigen::VectorXd dom = p.segment(k0, nd);
    rep.times.push_back(t);
    rep.mass_history.push_back(h * dom.sum());
    rep.energy_history.push_back(h * dom.squaredNorm());
    rep.dissipation_history.push_back(diss);
    if (opt.keep_trajectory) rep.trajectory.push_back(dom);
  };
  record(0.0, 0.0);
  const auto steps = static_cast<std::size_t>(std::llround(t_end / tau));
  const bool f_const = !prob.f.value || prob.f.time_independent;
  const bool g_const = !g_given || prob.g_ext.time_independent;
  double diss = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t0 = static_cast<double>(k - 1) * tau;
    const Eigen::VectorXd fk =
        time_average(f_const, t0, tau, [&](double t) { return domain_only(eval_on(prob.f, ext_nodes, t)); });
    const Eigen::VectorXd gk =
        time_average(g_const, t0, tau, [&](double t) { return collar_only(eval_on(prob.g_ext, ext_nodes, t)); });
    p = col.step(p, tau, fk, gk, opt, &rep);
    diss += tau * h * p.dot(-col.matrix * p);
    record(static_cast<double>(k) * tau, diss);
  }
  rep.solution = p.segment(k0, nd);
  rep.extended_solution = p;
  return rep;
}

namespace {

FluxField cumulative_flux(const Grid1D& ext, std::size_t collar, std::size_t n_domain, const Eigen::VectorXd& v) {
  FluxField out;
  const double h = ext.h();
  out.positions.push_back(ext.node(0) - 0.5 * h);
  out.values.push_back(0.0);
  for (std::size_t k = 0; k < ext.n; ++k) {
    out.positions.push_back(ext.node(k) + 0.5 * h);
    out.values.push_back(out.values.back() - h * v[static_cast<Eigen::Index>(k)]);
  }
  const std::size_t ia = collar - 1, ib = collar + n_domain;
  out.at_a = 0.5 * (out.values[ia] + out.values[ia + 1]);
  out.at_b = 0.5 * (out.values[ib] + out.values[ib + 1]);
  return out;
}

double base_estimate(const OperatorSpec& spec, const Grid1D& grid, double width, double sup) {
  double e = spec.coefficient() * sup * (grid.b - grid.a) * std::pow(width, -spec.beta) / spec.beta;
  if (spec.lambda > 0.0) e *= std::exp(-spec.lambda * width);
  return e;
}

}  // namespace

FluxField flux_field(const Grid1D& grid, const OperatorSpec& spec, const Eigen::VectorXd& p, const ExteriorData& g,
                     double t) {
  require(static_cast<std::size_t>(p.size()) == grid.n, "flux_field: p length does not match the grid");
  const DiscreteOperator inner = assemble(grid, spec);
  const std::size_t k = grid.n + 1;
  const double kh = static_cast<double>(k) * grid.h();
  const Grid1D ext(grid.a - kh, grid.b + kh, grid.n + 2 * k);
  const DiscreteOperator outer = assemble(ext, spec);
  Eigen::VectorXd pe(static_cast<Eigen::Index>(ext.n));
  double sup = p.cwiseAbs().maxCoeff();
  for (std::size_t i = 0; i < ext.n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    if (i >= k && i < k + grid.n) {
      pe[ii] = p[static_cast<Eigen::Index>(i - k)];
    } else {
      pe[ii] = g({ext.node(i), 0.0}, t);
      sup = std::max(sup, std::abs(pe[ii]));
    }
  }
  Eigen::VectorXd v = outer.apply(pe, g, t);
  // Inside the domain use the Dirichlet operator itself, so that a steady solution has zero divergence there.
  v.segment(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(grid.n)) = inner.apply(p, g, t);
  FluxField out = cumulative_flux(ext, k, grid.n, v);
  out.base_error_estimate = base_estimate(spec, grid, kh, sup);
  return out;
}

FluxField neumann_flux(const NeumannProblem& prob, const SolveReport& report) {
  const CollarOperator col = CollarOperator::build(prob.grid, prob.spec, prob.collar_width);
  require(report.extended_solution.size() == static_cast<Eigen::Index>(col.extended.n),
          "neumann_flux: report does not carry a matching collar solution");
  const Eigen::VectorXd v = col.matrix * report.extended_solution;
  FluxField out = cumulative_flux(col.extended, col.collar, prob.grid.n, v);
  out.base_error_estimate =
      base_estimate(prob.spec, prob.grid, static_cast<double>(col.collar) * prob.grid.h(),
                    report.extended_solution.cwiseAbs().maxCoeff());
  return out;
}

double dirichlet_uniqueness_check(const DirichletProblem& prob, const DirichletProblem& prob_alt,
                                  const SolverOptions& opt) {
  require(prob.op == prob_alt.op, "uniqueness check: both problems must share the operator");
  const SolveReport a = solve_steady_dirichlet(prob, opt);
  const SolveReport b = solve_steady_dirichlet(prob_alt, opt);
  return (a.solution - b.solution).cwiseAbs().maxCoeff();
}

}  // namespace levyfrac
