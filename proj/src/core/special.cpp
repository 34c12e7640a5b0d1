// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#include "special.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "error.hpp"

namespace levyfrac::special {
namespace {

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

double series_2f1(double a, double b, double c, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < 5000; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
    sum += term;
    if (term == 0.0 || std::abs(term) <= 1e-17 * std::abs(sum)) return sum;
  }
  fail(ErrorCode::numeric, "gauss_2f1: power series did not converge for a=" + std::to_string(a) +
                               " b=" + std::to_string(b) + " c=" + std::to_string(c) +
                               " z=" + std::to_string(z));
}

}  // namespace

double gamma(double x) {
  if (std::isnan(x)) fail(ErrorCode::domain, "gamma: NaN argument");
  if (is_nonpositive_integer(x)) fail(ErrorCode::domain, "gamma: pole at x=" + std::to_string(x));
  return std::tgamma(x);
}

double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  return 1.0 / std::tgamma(x);
}

double gauss_2f1(double a, double b, double c, double z) { return gauss_2f1(a, b, c, z, 1.0 - z); }

double gauss_2f1(double a, double b, double c, double z, double w) {
  if (is_nonpositive_integer(c)) fail(ErrorCode::domain, "gauss_2f1: c is a non-positive integer");
  if (!(z < 1.0) || !(w > 0.0)) fail(ErrorCode::domain, "gauss_2f1: requires z < 1");
  if (z == 0.0 || a == 0.0 || b == 0.0) return 1.0;
  if (z < 0.0) {
    // Pfaff: (1-z)^(-a) 2F1(a, c-b; c; z/(z-1)), and 1 - z/(z-1) = 1/w.
    const double zt = -z / w;
    return std::pow(w, -a) * gauss_2f1(a, c - b, c, zt, 1.0 / w);
  }
  if (z <= 0.5) return series_2f1(a, b, c, z);

  const double d = c - a - b;
  if (d == std::round(d)) {
    fail(ErrorCode::numeric,
         "gauss_2f1: c-a-b is an integer, connection formula degenerate (c-a-b=" + std::to_string(d) +
             ")");
  }
  // The coefficient Gamma(c)Gamma(d)/(Gamma(c-a)Gamma(c-b)) uses reciprocal gammas so that
  // a pole in the denominator simply zeroes the term.
  const double gc = std::tgamma(c);
  const double t1 = gc * std::tgamma(d) * rgamma(c - a) * rgamma(c - b);
  const double t2 = gc * std::tgamma(-d) * rgamma(a) * rgamma(b);
  double out = 0.0;
  if (t1 != 0.0) out += t1 * series_2f1(a, b, 1.0 - d, w);
  if (t2 != 0.0) out += t2 * std::pow(w, d) * series_2f1(c - a, c - b, 1.0 + d, w);
  return out;
}

double upper_gamma(double s, double x) {
  if (!(x > 0.0)) fail(ErrorCode::domain, "upper_gamma: requires x > 0");
  if (std::isinf(x)) return 0.0;
  if (s > 0.0) return boost::math::tgamma(s, x);
  if (s == 0.0) return boost::math::expint(1, x);
  // Downward recurrence Gamma(s,x) = (Gamma(s+1,x) - x^s e^-x) / s.
  return (upper_gamma(s + 1.0, x) - std::pow(x, s) * std::exp(-x)) / s;
}

double power_exp_integral(double s, double lambda, double lo, double hi) {
  if (!(lo >= 0.0) || !(hi > lo) || lambda < 0.0) {
    fail(ErrorCode::domain, "power_exp_integral: requires 0 <= lo < hi, lambda >= 0");
  }
  if (lambda == 0.0) {
    if (std::isinf(hi) && s >= 0.0) fail(ErrorCode::domain, "power_exp_integral: divergent at infinity");
    if (lo == 0.0 && s <= 0.0) fail(ErrorCode::domain, "power_exp_integral: divergent at zero");
    if (s == 0.0) return std::log(hi / lo);
    const double top = std::isinf(hi) ? 0.0 : std::pow(hi, s);
    return (top - std::pow(lo, s)) / s;
  }
  const double scale = std::pow(lambda, -s);
  const double xl = lambda * lo;
  const double xh = lambda * hi;
  if (lo == 0.0) {
    if (s <= 0.0) fail(ErrorCode::domain, "power_exp_integral: divergent at zero");
    if (std::isinf(hi)) return scale * std::tgamma(s);
    return scale * boost::math::tgamma_lower(s, xh);
  }
  if (s > 0.0 && !std::isinf(hi) && xh <= s + 1.0) {
    return scale * (boost::math::tgamma_lower(s, xh) - boost::math::tgamma_lower(s, xl));
  }
  return scale * (upper_gamma(s, xl) - upper_gamma(s, xh));
}

double frac_lap_coeff(int n, double beta) {
  require(n >= 1, "frac_lap_coeff: n must be >= 1");
  require_domain(beta > 0.0 && beta < 2.0, "frac_lap_coeff: beta must lie in (0,2)");
  const double nd = n;
  return beta * std::tgamma(0.5 * (nd + beta)) /
         (std::pow(2.0, 1.0 - beta) * std::pow(std::numbers::pi, 0.5 * nd) * std::tgamma(1.0 - 0.5 * beta));
}

double tempered_coeff(int n, double beta) {
  require(n >= 1, "tempered_coeff: n must be >= 1");
  require_domain(beta > 0.0 && beta < 2.0 && beta != 1.0,
                 "tempered_coeff: beta must lie in (0,1) or (1,2)");
  const double nd = n;
  return -std::tgamma(0.5 * nd) / (2.0 * std::pow(std::numbers::pi, 0.5 * nd) * std::tgamma(-beta));
}

double fractional_symbol(double beta, double k) {
  require_domain(beta > 0.0 && beta < 2.0, "fractional_symbol: beta must lie in (0,2)");
  return -std::pow(std::abs(k), beta);
}

double tempered_symbol(int n, double beta, double lambda, double k) {
  require(n >= 1, "tempered_symbol: n must be >= 1");
  require_domain(beta > 0.0 && beta < 2.0 && beta != 1.0,
                 "tempered_symbol: beta must lie in (0,1) or (1,2)");
  require_domain(lambda > 0.0, "tempered_symbol: lambda must be > 0 (use fractional_symbol for lambda=0)");
  const double k2 = k * k;
  if (k2 == 0.0) return 0.0;
  const double l2 = lambda * lambda;
  const double r2 = l2 + k2;
  const double nd = n;
  const double f = gauss_2f1(-0.5 * beta, 0.5 * (nd + beta - 1.0), 0.5 * nd, k2 / r2, l2 / r2);
  return std::pow(lambda, beta) - std::pow(r2, 0.5 * beta) * f;
}

}  // namespace levyfrac::special
