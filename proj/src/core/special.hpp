// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>

namespace levyfrac::special {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Euler gamma. Throws a domain error at the poles 0, -1, -2, ...
double gamma(double x);

/// 1/Gamma(x), zero at the poles.
double rgamma(double x);

/// Gauss hypergeometric 2F1(a,b;c;z) for real z < 1.
double gauss_2f1(double a, double b, double c, double z);

/// Same, with w = 1 - z supplied separately so that z close to 1 keeps its precision.
double gauss_2f1(double a, double b, double c, double z, double w);

/// Upper incomplete gamma Gamma(s, x) for any real s and x > 0.
double upper_gamma(double s, double x);

/// int_lo^hi xi^(s-1) exp(-lambda xi) dxi, 0 <= lo < hi <= inf, lambda >= 0.
double power_exp_integral(double s, double lambda, double lo, double hi);

/// c_{n,beta} of the fractional Laplacian, beta in (0,2).
double frac_lap_coeff(int n, double beta);

/// c_{n,beta,lambda} of the tempered fractional Laplacian, beta in (0,1) or (1,2).
/// Negative for beta in (1,2).
double tempered_coeff(int n, double beta);

/// Fourier multiplier of the fractional Laplacian: -|k|^beta.
double fractional_symbol(double beta, double k);

/// lambda^beta - (lambda^2+k^2)^(beta/2) 2F1(-beta/2, (n+beta-1)/2; n/2; k^2/(lambda^2+k^2)).
double tempered_symbol(int n, double beta, double lambda, double k);

}  // namespace levyfrac::special
