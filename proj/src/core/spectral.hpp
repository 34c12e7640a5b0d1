// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "types.hpp"

namespace levyfrac {

/// Real samples on [origin, origin + length) with M = 2^p points, periodic.
struct PeriodicField {
  double origin = 0.0;
  double length = 1.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double spacing() const { return length / static_cast<double>(values.size()); }
  double position(std::size_t j) const { return origin + static_cast<double>(j) * spacing(); }
  void validate() const;
};

/// Two-dimensional periodic field, x index fastest.
struct PeriodicField2D {
  double origin_x = 0.0, origin_y = 0.0;
  double length_x = 1.0, length_y = 1.0;
  std::size_t mx = 0, my = 0;
  std::vector<double> values;
};

/// Multiplies by a real even symbol in Fourier space.
PeriodicField multiplier_apply(const PeriodicField& field, const std::function<double(double)>& symbol);
PeriodicField2D multiplier_apply_2d(const PeriodicField2D& field, const std::function<double(double, double)>& symbol);

/// Applies the generator symbol of the spec (fractional or tempered) to the field.
PeriodicField symbol_apply(const PeriodicField& field, const OperatorSpec& spec);

struct SpectralOptions {
  std::size_t refine = 4;      // FFT points per grid spacing
  double box_factor = 64.0;    // periodic box at least box_factor * (b - a)
  bool image_correction = true;
};

/// Reference values of the generator applied to a compactly supported p, at the grid nodes.
/// The FFT grid is aligned with the nodes; periodic images are removed with their far-field form.
Eigen::VectorXd spectral_reference(const Grid1D& grid, const OperatorSpec& spec, const std::function<double(double)>& p,
                                   const SpectralOptions& opt = {});

using ComplexFn = std::function<std::complex<double>(std::complex<double>)>;

/// (1 - phi(u))/u * p0(k) / (1 - phi(u) psi(k)).
std::complex<double> montroll_weiss(const ComplexFn& phi_hat, const ComplexFn& psi_hat, const ComplexFn& p0_hat,
                                    double k, std::complex<double> u);

struct IdentityCheck {
  std::vector<double> k;
  std::vector<double> quadrature;  // c_{n,beta,lambda} times the defining integral
  std::vector<double> closed_form;
  std::vector<double> rel_error;
  double max_rel_error = 0.0;
};

IdentityCheck verify_tempered_identity(int n, double beta, double lambda, const std::vector<double>& k_grid);

/// (||Delta^{1/2} p||^2, ||grad p||^2), both evaluated in physical space after spectral application.
std::pair<double, double> energy_equivalence_check(const PeriodicField& field);

void write_identity_csv(const std::string& path, int n, double beta, double lambda, const IdentityCheck& chk,
                        bool header = true);

}  // namespace levyfrac
