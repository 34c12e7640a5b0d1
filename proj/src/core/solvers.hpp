// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "exterior.hpp"
#include "operators.hpp"

namespace levyfrac {

struct SolverOptions {
  double tolerance = 1e-12;      // relative CG residual
  std::size_t max_iterations = 0;  // 0: 10 * unknowns
  double tau_max = 0.5;          // time-step cap
  bool keep_trajectory = false;
};

struct SolveReport {
  Eigen::VectorXd solution;
  std::vector<Point> nodes;
  double residual_norm = 0.0;
  std::size_t iterations = 0;  // total CG iterations
  bool converged = true;
  double source_error_estimate = 0.0;
  std::vector<double> times;
  std::vector<double> mass_history;         // cell volume times the nodal sum
  std::vector<double> energy_history;       // ||p_k||^2 in L2(Omega)
  std::vector<double> dissipation_history;  // tau sum_j |Delta^{beta/4} p_j|^2 surrogate, cumulative
  std::vector<Eigen::VectorXd> trajectory;
  Eigen::VectorXd extended_solution;  // Neumann: values on the collar grid
  std::vector<Point> extended_nodes;
  bool reflecting = false;
  std::vector<std::string> warnings;
};

struct DirichletProblem {
  std::shared_ptr<const DiscreteOperator> op;
  ExteriorData g;
  ExteriorData f;      // forcing on the domain; empty evaluator means zero
  Eigen::VectorXd p0;  // transient only
};

struct NeumannProblem {
  Grid1D grid;
  OperatorSpec spec;
  ExteriorData g_ext;  // operator values on the complement; zero is the reflecting case
  ExteriorData f;
  Eigen::VectorXd p0;
  double collar_width = 0.0;  // 0: b - a on each side
};

/// Half-open interval [lo, hi) of the complement.
struct Interval {
  double lo;
  double hi;
};

SolveReport solve_steady_dirichlet(const DirichletProblem& prob, const SolverOptions& opt = {});

/// Steady Dirichlet problem with g the indicator of the union of the intervals of H.
SolveReport escape_probability(const Grid1D& grid, const OperatorSpec& spec, const std::vector<Interval>& h,
                               const SolverOptions& opt = {});

/// One backward-Euler step: (I/tau - A + T) p = prev/tau + f_k + source_k.
Eigen::VectorXd step_implicit(const DiscreteOperator& op, const Eigen::VectorXd& prev, double tau,
                              const Eigen::VectorXd& f_k, const Eigen::VectorXd& source_k,
                              const SolverOptions& opt = {}, SolveReport* stats = nullptr);

SolveReport solve_transient(const DirichletProblem& prob, double t_end, double tau, const SolverOptions& opt = {});
SolveReport solve_transient(const NeumannProblem& prob, double t_end, double tau, const SolverOptions& opt = {});

/// Operator on the domain extended by a collar on each side; no interaction beyond the collar.
struct CollarOperator {
  Grid1D extended;
  std::size_t collar = 0;  // collar nodes per side, the boundary node included
  Eigen::MatrixXd matrix;
  std::vector<bool> in_domain;

  static CollarOperator build(const Grid1D& grid, const OperatorSpec& spec, double collar_width);
  /// One Neumann step on the extended unknowns.
  Eigen::VectorXd step(const Eigen::VectorXd& prev_ext, double tau, const Eigen::VectorXd& f_domain,
                       const Eigen::VectorXd& g_collar, const SolverOptions& opt, SolveReport* stats) const;
};

struct FluxField {
  std::vector<double> positions;  // midpoints between consecutive extended nodes
  std::vector<double> values;
  double at_a = 0.0;
  double at_b = 0.0;
  double base_error_estimate = 0.0;
};

/// j(x) = -int_{-inf}^x (generator applied to p) ds, p given on the grid and g on the complement.
FluxField flux_field(const Grid1D& grid, const OperatorSpec& spec, const Eigen::VectorXd& p, const ExteriorData& g,
                     double t = 0.0);

/// Flux of a Neumann solution from its collar values.
FluxField neumann_flux(const NeumannProblem& prob, const SolveReport& report);

/// Solves both problems; they must share the operator and agree outside the domain.
double dirichlet_uniqueness_check(const DirichletProblem& prob, const DirichletProblem& prob_alt,
                                  const SolverOptions& opt = {});

}  // namespace levyfrac
