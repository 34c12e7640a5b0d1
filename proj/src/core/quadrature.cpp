// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#include "quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "error.hpp"
#include "special.hpp"

namespace levyfrac::quad {
namespace {

constexpr double kPi = std::numbers::pi;

// Far end of the radial integrals: exp(-lambda r) is below 1e-20 there.
double far_end(double lambda) { return 46.0 / lambda; }

}  // namespace

double gauss_kronrod(const std::function<double(double)>& f, double a, double b, double tol) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol, &err);
}

double tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol) {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(12);
  double err = 0.0;
  double l1 = 0.0;
  return integrator.integrate(f, a, b, tol, &err, &l1);
}

double panels(const std::function<double(double)>& f, double a, double b, double width, double tol) {
  require(width > 0.0, "panels: width must be positive");
  double sum = 0.0;
  for (double lo = a; lo < b; lo += width) {
    const double hi = std::min(b, lo + width);
    sum += gauss_kronrod(f, lo, hi, tol);
  }
  return sum;
}

double symbol_integral_1d(double beta, double lambda, double k) {
  k = std::abs(k);
  if (k == 0.0) return 0.0;
  auto f = [=](double y) {
    if (y <= 0.0) return 0.0;
    const double s = std::sin(0.5 * k * y) / y;
    return -2.0 * s * s * std::exp(-lambda * y) * std::pow(y, 1.0 - beta);
  };
  const double p = kPi / k;
  double sum = tanh_sinh(f, 0.0, p);
  if (lambda > 0.0) {
    // int_p^inf (cos(k y) - 1) e^(-lambda y) y^(-1-beta) dy; cos(k (p + t)) = -cos(k t).
    auto g = [=](double t) { return std::exp(-lambda * (p + t)) * std::pow(p + t, -1.0 - beta); };
    boost::math::quadrature::ooura_fourier_cos<double> oc(1e-14);
    sum += -oc.integrate(g, k).first - special::power_exp_integral(-beta, lambda, p, special::kInf);
  } else {
    const double end = 64.0 * p;
    sum += panels(f, p, end, p);
    // Tail: int_end^inf cos(k y) y^(-1-beta) dy via Ooura, minus end^(-beta)/beta.
    auto g = [=](double t) { return std::pow(end + t, -1.0 - beta); };
    boost::math::quadrature::ooura_fourier_cos<double> oc;
    boost::math::quadrature::ooura_fourier_sin<double> os;
    const double ci = oc.integrate(g, k).first;
    const double si = os.integrate(g, k).first;
    sum += std::cos(k * end) * ci - std::sin(k * end) * si - std::pow(end, -beta) / beta;
  }
  return 2.0 * sum;
}

double angular_factor(double rho) {
  const int m = 32 + 2 * static_cast<int>(std::ceil(std::abs(rho)));
  double sum = 0.0;
  for (int j = 0; j < m; ++j) {
    const double s = std::sin(0.5 * rho * std::cos(2.0 * kPi * j / m));
    sum += -2.0 * s * s;
  }
  return sum * 2.0 * kPi / m;
}

double symbol_integral_2d(double beta, double lambda, double k) {
  k = std::abs(k);
  if (k == 0.0) return 0.0;
  // For large k r the angular factor is evaluated through J0 to keep the cost bounded.
  auto factor = [=](double r) {
    const double rho = k * r;
    if (rho < 60.0) return angular_factor(rho);
    return 2.0 * kPi * (boost::math::cyl_bessel_j(0, rho) - 1.0);
  };
  auto f = [=](double r) {
    if (r <= 0.0) return 0.0;
    return (factor(r) / r) / r * std::exp(-lambda * r) * std::pow(r, 1.0 - beta);
  };
  const double p = kPi / k;
  double sum = tanh_sinh(f, 0.0, p);
  if (lambda > 0.0) {
    const double end = std::max(far_end(lambda), 2.0 * p);
    sum += panels(f, p, end, std::min(p, 0.25 * end));
  } else {
    const double end = 2000.0 / k;
    sum += panels(f, p, end, p, 1e-12);
    sum += -2.0 * kPi * std::pow(end, -beta) / beta;
  }
  return sum;
}

}  // namespace levyfrac::quad
