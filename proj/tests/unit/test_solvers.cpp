// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include "doctest.h"
#include "error.hpp"
#include "solvers.hpp"

using namespace levyfrac;

namespace {

std::shared_ptr<const DiscreteOperator> make_op(const Grid1D& g, const OperatorSpec& s) {
  return std::make_shared<const DiscreteOperator>(assemble(g, s));
}

Eigen::VectorXd bump_on(const Grid1D& grid, double center, double width) {
  const ExteriorData b = make_data("bump", {{"center", center}, {"width", width}});
  Eigen::VectorXd v(static_cast<Eigen::Index>(grid.n));
  for (std::size_t i = 0; i < grid.n; ++i) v[static_cast<Eigen::Index>(i)] = b({grid.node(i), 0}, 0);
  return v;
}

}  // namespace

TEST_CASE("constant solution for g = 1") {
  for (const OperatorSpec s : {OperatorSpec::fractional(0.5), OperatorSpec::fractional(1.2),
                               OperatorSpec::tempered(1.8, 0.5), OperatorSpec::tempered(0.3, 3.0)}) {
    DirichletProblem prob{make_op(Grid1D(0, 1, 80), s), make_data("one"), {}, {}};
    const SolveReport r = solve_steady_dirichlet(prob);
    CHECK((r.solution.array() - 1.0).abs().maxCoeff() < 1e-9);
    CHECK(r.residual_norm <= 1e-10);
    CHECK(r.converged);
  }
}

TEST_CASE("two-node instance against Cramer's rule") {
  const Grid1D grid(0, 1, 2);
  const auto op = make_op(grid, OperatorSpec::fractional(0.7));
  const ExteriorData g = make_data("indicator", {{"lo", 1.0}, {"hi", 3.0}});
  DirichletProblem prob{op, g, {}, {}};
  const SolveReport r = solve_steady_dirichlet(prob);
  const auto& a = op->interior_matrix();
  const auto& t = op->diagonal_tail();
  const Eigen::VectorXd s = op->exterior_source(g).values;
  const double m00 = -a(0, 0) + t[0], m01 = -a(0, 1), m10 = -a(1, 0), m11 = -a(1, 1) + t[1];
  const double det = m00 * m11 - m01 * m10;
  CHECK(std::abs(r.solution[0] - (s[0] * m11 - m01 * s[1]) / det) < 1e-12);
  CHECK(std::abs(r.solution[1] - (m00 * s[1] - m10 * s[0]) / det) < 1e-12);

  // One implicit step on the same grid.
  const double tau = 0.1;
  const Eigen::VectorXd prev = Eigen::Vector2d(0.3, -0.2);
  const Eigen::VectorXd f = Eigen::Vector2d(1.0, 0.5);
  const Eigen::VectorXd p = step_implicit(*op, prev, tau, f, s);
  const double n00 = m00 + 1 / tau, n11 = m11 + 1 / tau, d2 = n00 * n11 - m01 * m10;
  const Eigen::VectorXd rhs = prev / tau + f + s;
  CHECK(std::abs(p[0] - (rhs[0] * n11 - m01 * rhs[1]) / d2) < 1e-12);
  CHECK(std::abs(p[1] - (n00 * rhs[1] - m10 * rhs[0]) / d2) < 1e-12);
}

TEST_CASE("escape probabilities") {
  const Grid1D grid(-1, 1, 101);
  const OperatorSpec s = OperatorSpec::fractional(1.2);
  const SolveReport all = escape_probability(grid, s, {{-1e300, -1}, {1, 1e300}});
  CHECK((all.solution.array() - 1.0).abs().maxCoeff() < 1e-9);
  const SolveReport right = escape_probability(grid, s, {{1, 1e300}});
  CHECK(std::abs(right.solution[50] - 0.5) < 1e-10);
  CHECK(right.solution.minCoeff() >= 0.0);
  CHECK(right.solution.maxCoeff() <= 1.0);
  CHECK_THROWS_AS(escape_probability(grid, s, {{0.5, 2}}), Error);

  // Partition of the complement: the four solutions add up to one.
  const Grid1D g01(0, 1, 99);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(99);
  for (Interval iv : std::vector<Interval>{{-1e300, -1}, {-1, 0}, {1, 2}, {2, 1e300}}) {
    const SolveReport r = escape_probability(g01, OperatorSpec::tempered(0.6, 1.5), {iv});
    CHECK(r.solution.minCoeff() >= -1e-12);
    sum += r.solution;
  }
  CHECK((sum.array() - 1.0).abs().maxCoeff() < 1e-8);
}

TEST_CASE("discrete maximum principle") {
  ExteriorData g;
  g.value = [](Point x, double) { return std::sin(3 * x.x) + 0.5 * std::cos(x.x); };
  g.name = "wave";
  const Grid1D grid(0, 2, 60);
  DirichletProblem prob{make_op(grid, OperatorSpec::fractional(1.5)), g, {}, {}};
  const SolveReport r = solve_steady_dirichlet(prob);
  double lo = 1e300, hi = -1e300;
  for (double y = -400; y <= 402; y += 0.01) {
    if (y > 0 && y < 2) continue;
    lo = std::min(lo, g({y, 0}, 0));
    hi = std::max(hi, g({y, 0}, 0));
  }
  CHECK(r.solution.minCoeff() >= lo - 1e-12);
  CHECK(r.solution.maxCoeff() <= hi + 1e-12);
}

TEST_CASE("large step approaches the steady state") {
  const Grid1D grid(0, 1, 40);
  const auto op = make_op(grid, OperatorSpec::tempered(1.3, 0.8));
  const ExteriorData g = make_data("indicator", {{"lo", 1.0}, {"hi", 1.5}});
  const SolveReport st = solve_steady_dirichlet({op, g, {}, {}});
  SolverOptions opt;
  opt.tau_max = 1e7;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(40);
  const Eigen::VectorXd p = step_implicit(*op, zero, 1e6, zero, op->exterior_source(g).values, opt);
  CHECK((p - st.solution).cwiseAbs().maxCoeff() < 1e-6);
  CHECK_THROWS_AS(step_implicit(*op, zero, 1.0, zero, zero), Error);
}

TEST_CASE("absorbing transient decays") {
  const Grid1D grid(0, 1, 60);
  for (const OperatorSpec s : {OperatorSpec::fractional(0.6), OperatorSpec::tempered(1.5, 1.0)}) {
    DirichletProblem prob{make_op(grid, s), make_data("zero"), {}, bump_on(grid, 0.4, 0.3)};
    SolverOptions opt;
    opt.keep_trajectory = true;
    const SolveReport r = solve_transient(prob, 0.5, 0.01, opt);
    REQUIRE(r.energy_history.size() == 51);
    for (std::size_t k = 1; k < r.energy_history.size(); ++k) {
      CHECK(r.energy_history[k] <= r.energy_history[k - 1]);
      CHECK(r.trajectory[k].cwiseAbs().maxCoeff() <= r.trajectory[k - 1].cwiseAbs().maxCoeff());
    }
    // Energy identity for backward Euler: E_N + 2 tau sum |.|^2 <= E_0.
    CHECK(r.energy_history.back() + 2 * r.dissipation_history.back() <= r.energy_history.front() * (1 + 1e-12));
  }
  DirichletProblem bad{make_op(grid, OperatorSpec::fractional(1.0)), make_data("zero"), {}, Eigen::VectorXd::Zero(3)};
  CHECK_THROWS_AS(solve_transient(bad, 1.0, 0.1), Error);
  DirichletProblem ok{make_op(grid, OperatorSpec::fractional(1.0)), make_data("zero"), {}, Eigen::VectorXd::Zero(60)};
  CHECK_THROWS_AS(solve_transient(ok, 1.0, 0.3), Error);
}

TEST_CASE("backward Euler self-convergence is first order") {
  const Grid1D grid(0, 1, 50);
  ExteriorData f;
  f.value = [](Point x, double t) { return std::cos(4 * t) * x.x; };
  f.time_independent = false;
  ExteriorData g;
  g.value = [](Point, double t) { return 1.0 + 0.5 * std::sin(3 * t); };
  g.time_independent = false;
  g.name = "oscillating";
  DirichletProblem prob{make_op(grid, OperatorSpec::fractional(1.4)), g, f, bump_on(grid, 0.5, 0.4)};
  const Eigen::VectorXd p1 = solve_transient(prob, 1.0, 0.1).solution;
  const Eigen::VectorXd p2 = solve_transient(prob, 1.0, 0.05).solution;
  const Eigen::VectorXd p3 = solve_transient(prob, 1.0, 0.025).solution;
  const double order = std::log2((p1 - p2).cwiseAbs().maxCoeff() / (p2 - p3).cwiseAbs().maxCoeff());
  CHECK(order > 0.8);
  CHECK(order < 1.2);
}

TEST_CASE("reflecting Neumann conserves mass and has zero boundary flux") {
  const Grid1D grid(0, 1, 60);
  NeumannProblem prob{grid, OperatorSpec::fractional(1.3), make_data("zero"), {}, bump_on(grid, 0.35, 0.3)};
  const SolveReport r = solve_transient(prob, 0.5, 0.01);
  CHECK(r.reflecting);
  for (double m : r.mass_history) CHECK(std::abs(m - r.mass_history[0]) <= 1e-8 * r.mass_history[0]);
  const FluxField j = neumann_flux(prob, r);
  const double scale = std::abs(*std::max_element(j.values.begin(), j.values.end(),
                                                  [](double x, double y) { return std::abs(x) < std::abs(y); }));
  CHECK(std::abs(j.at_a) <= 1e-8 * std::max(1.0, scale));
  CHECK(std::abs(j.at_b) <= 1e-8 * std::max(1.0, scale));

  // Symmetric data: flux antisymmetric about the centre.
  NeumannProblem sym{grid, OperatorSpec::tempered(0.7, 1.0), make_data("zero"), {}, bump_on(grid, 0.5, 0.3)};
  const SolveReport rs = solve_transient(sym, 0.1, 0.01);
  const FluxField js = neumann_flux(sym, rs);
  const std::size_t m = js.values.size();
  for (std::size_t i = 0; i < m; ++i) CHECK(std::abs(js.values[i] + js.values[m - 1 - i]) < 1e-10);
}

TEST_CASE("Dirichlet flux is constant across the domain at steady state") {
  const Grid1D grid(0, 1, 40);
  const OperatorSpec s = OperatorSpec::fractional(1.2);
  const ExteriorData g = make_data("indicator", {{"lo", 1.0}, {"hi", 4.0}});
  const SolveReport r = solve_steady_dirichlet({make_op(grid, s), g, {}, {}});
  const FluxField j = flux_field(grid, s, r.solution, g);
  // Staggered points strictly inside the domain are indices collar .. collar + N.
  const std::size_t k = grid.n + 1;
  for (std::size_t i = k; i <= k + grid.n; ++i) CHECK(std::abs(j.values[i] - j.values[k]) < 1e-9);
  CHECK(j.base_error_estimate > 0.0);
}

TEST_CASE("solution depends only on exterior values of g") {
  const Grid1D grid(0, 1, 50);
  const auto op = make_op(grid, OperatorSpec::tempered(1.5, 0.5));
  const ExteriorData g = make_data("exp-decay", {{"c", 0.3}});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const double amp = 5 * u(rng), freq = 10 * u(rng);
    ExteriorData alt = g;
    alt.value = [=](Point x, double t) {
      const double base = g(x, t);
      return (x.x > 0 && x.x < 1) ? base + amp * std::sin(freq * x.x) : base;
    };
    CHECK(dirichlet_uniqueness_check({op, g, {}, {}}, {op, alt, {}, {}}) <= 1e-9);
  }
  CHECK(dirichlet_uniqueness_check({op, g, {}, {}}, {op, g, {}, {}}) == 0.0);
}
