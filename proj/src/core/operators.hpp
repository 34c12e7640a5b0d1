// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "exterior.hpp"
#include "types.hpp"

namespace levyfrac {

struct AssembleOptions {
  double radius_factor = 50.0;  // exterior mesh reaches radius_factor * (b - a)
  double grading = 0.005;       // relative growth of exterior cells
  bool with_exterior = true;    // false: interior matrix and tails only
};

/// Exterior-source result with an estimate of the truncated far-field contribution.
struct SourceResult {
  Eigen::VectorXd values;
  double error_estimate = 0.0;
};

class LineSource;

/// Discrete generator on a bounded grid: apply(p) = A p - T p + s(g).
class DiscreteOperator {
 public:
  std::size_t size() const { return static_cast<std::size_t>(matrix_.rows()); }
  int dimension() const { return dim_; }
  const Eigen::MatrixXd& interior_matrix() const { return matrix_; }
  /// Total diagonal weight T: exterior tail plus boundary-trace weights.
  const Eigen::VectorXd& diagonal_tail() const { return tail_; }
  /// Closed-form exterior tail alone.
  const Eigen::VectorXd& exterior_tail() const { return exterior_tail_; }
  const std::vector<Point>& nodes() const { return nodes_; }
  const OperatorSpec& spec(int axis = 0) const { return specs_[axis]; }
  const Box& domain() const { return box_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const Grid1D& grid(int axis = 0) const { return grids_[axis]; }

  /// Growth-checked exterior source vector.
  SourceResult exterior_source(const ExteriorData& g, double t = 0.0) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& p, const ExteriorData& g, double t = 0.0) const;

  /// (row, col, value) triplets of the nonzero entries of A, then the tail as a last column block.
  void write_csv(const std::string& path) const;

  friend DiscreteOperator assemble(const Grid1D&, const OperatorSpec&, const AssembleOptions&);
  friend DiscreteOperator assemble_hv(const Grid2D&, const OperatorSpec&, const OperatorSpec&,
                                      const AssembleOptions&);

 private:
  int dim_ = 1;
  Eigen::MatrixXd matrix_;
  Eigen::VectorXd tail_;
  Eigen::VectorXd exterior_tail_;
  std::vector<Point> nodes_;
  std::vector<OperatorSpec> specs_;
  std::vector<Grid1D> grids_;
  Box box_;
  std::vector<std::string> warnings_;
  std::vector<std::shared_ptr<const LineSource>> lines_;
};

/// One-dimensional kernel weights of the generator on a uniform grid.
struct KernelWeights {
  std::vector<double> interior;  // omega_k, k = 1..N (index k-1)
  std::vector<double> boundary;  // trace weights, k = 1..N
};
KernelWeights kernel_weights(const OperatorSpec& spec, double h, std::size_t n);

/// c * int_lo^hi w(xi) xi^(-1-beta) dxi for the generator kernel.
double kernel_integral(const OperatorSpec& spec, double lo, double hi);

DiscreteOperator assemble(const Grid1D& grid, const OperatorSpec& spec, const AssembleOptions& opt = {});

/// Horizontal-vertical operator: Kronecker sum of the two axis operators.
DiscreteOperator assemble_hv(const Grid2D& grid, const OperatorSpec& sx, const OperatorSpec& sy,
                             const AssembleOptions& opt = {});

SourceResult exterior_source(const Grid1D& grid, const OperatorSpec& spec, const ExteriorData& g, double t = 0.0);

/// Riesz-form oracle for beta in (1,2):
/// -1/(2 cos(beta pi/2) Gamma(2-beta)) d^2/dx^2 int |x-y|^(1-beta) p(y) dy at the grid nodes,
/// with p supported in [lo, hi]. The second derivative is a Richardson-extrapolated central
/// difference with base step delta (0: grid spacing).
Eigen::VectorXd riesz_apply(const Grid1D& grid, double beta, const std::function<double(double)>& p, double lo,
                            double hi, double delta = 0.0);

}  // namespace levyfrac
