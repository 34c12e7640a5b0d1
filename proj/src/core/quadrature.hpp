// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

namespace levyfrac::quad {

/// Adaptive Gauss-Kronrod (61 points) on a finite interval.
double gauss_kronrod(const std::function<double(double)>& f, double a, double b, double tol = 1e-14);

/// Tanh-sinh on a finite interval; tolerates integrable endpoint singularities.
double tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol = 1e-14);

/// Panel-wise Gauss-Kronrod over [a, b] with panels of the given width.
double panels(const std::function<double(double)>& f, double a, double b, double width, double tol = 1e-14);

/// int_R (cos(k y) - 1) exp(-lambda |y|) |y|^(-1-beta) dy, computed by direct quadrature.
double symbol_integral_1d(double beta, double lambda, double k);

/// int_{R^2} (cos(k.Y) - 1) exp(-lambda |Y|) |Y|^(-2-beta) dY, via the radial reduction with the
/// angular factor obtained by periodic trapezoid.
double symbol_integral_2d(double beta, double lambda, double k);

/// int_0^{2 pi} (cos(rho cos t) - 1) dt by periodic trapezoid.
double angular_factor(double rho);

}  // namespace levyfrac::quad
