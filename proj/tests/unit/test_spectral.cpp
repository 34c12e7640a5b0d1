// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "error.hpp"
#include "exterior.hpp"
#include "operators.hpp"
#include "special.hpp"
#include "spectral.hpp"

using namespace levyfrac;
using cd = std::complex<double>;

namespace {

PeriodicField mode_field(std::size_t m, double length, double k) {
  PeriodicField f;
  f.length = length;
  f.values.resize(m);
  for (std::size_t j = 0; j < m; ++j) f.values[j] = std::cos(k * f.position(j));
  return f;
}

double bump(double x) {
  const double r = (x - 0.5) / 0.3;
  return std::abs(r) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
}

}  // namespace

TEST_CASE("symbol application") {
  const double length = 2.0 * std::numbers::pi;
  SUBCASE("constant") {
    PeriodicField f;
    f.length = length;
    f.values.assign(64, 3.0);
    for (double v : symbol_apply(f, OperatorSpec::fractional(1.3)).values) CHECK(std::abs(v) < 1e-13);
  }
  SUBCASE("single mode") {
    const PeriodicField f = mode_field(64, length, 5.0);
    const PeriodicField g = symbol_apply(f, OperatorSpec::fractional(1.5));
    for (std::size_t j = 0; j < f.size(); ++j)
      CHECK(g.values[j] == doctest::Approx(-std::pow(5.0, 1.5) * f.values[j]).epsilon(1e-12).scale(1.0));
    const PeriodicField t = symbol_apply(f, OperatorSpec::tempered(0.7, 0.5));
    const double s = OperatorSpec::tempered(0.7, 0.5).symbol(5.0);
    for (std::size_t j = 0; j < f.size(); ++j) CHECK(std::abs(t.values[j] - s * f.values[j]) < 1e-12);
  }
  SUBCASE("linearity") {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> nd;
    PeriodicField u, v, w;
    u.length = v.length = w.length = 10.0;
    for (int j = 0; j < 128; ++j) {
      u.values.push_back(nd(gen));
      v.values.push_back(nd(gen));
      w.values.push_back(2.0 * u.values.back() - 0.5 * v.values.back());
    }
    const OperatorSpec spec = OperatorSpec::tempered(1.4, 1.0);
    const auto su = symbol_apply(u, spec), sv = symbol_apply(v, spec), sw = symbol_apply(w, spec);
    for (int j = 0; j < 128; ++j) CHECK(std::abs(sw.values[j] - 2.0 * su.values[j] + 0.5 * sv.values[j]) < 1e-12);
  }
  SUBCASE("size validation") {
    PeriodicField f;
    f.values.assign(100, 0.0);
    CHECK_THROWS_AS(symbol_apply(f, OperatorSpec::fractional(1.0)), Error);
  }
  SUBCASE("two dimensions") {
    PeriodicField2D f;
    f.mx = 32;
    f.my = 16;
    f.length_x = f.length_y = length;
    for (std::size_t j = 0; j < f.my; ++j)
      for (std::size_t i = 0; i < f.mx; ++i)
        f.values.push_back(std::cos(3.0 * length * i / f.mx) * std::cos(4.0 * length * j / f.my));
    const PeriodicField2D g = multiplier_apply_2d(f, [](double kx, double ky) { return -std::hypot(kx, ky); });
    for (std::size_t q = 0; q < f.values.size(); ++q) CHECK(std::abs(g.values[q] + 5.0 * f.values[q]) < 1e-12);
  }
}

TEST_CASE("reference against the discrete operator") {
  for (const OperatorSpec& spec : {OperatorSpec::fractional(1.2), OperatorSpec::fractional(0.6), OperatorSpec::tempered(1.5, 1.0)}) {
    CAPTURE(spec.describe());
    const ExteriorData zero = make_data("zero");
    std::vector<double> errs;
    for (std::size_t n : {100, 200, 400}) {
      const Grid1D grid{0.0, 1.0, n};
      const DiscreteOperator op = assemble(grid, spec);
      Eigen::VectorXd p(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) p[static_cast<Eigen::Index>(i)] = bump(grid.node(i));
      const Eigen::VectorXd ref = spectral_reference(grid, spec, bump);
      errs.push_back((op.apply(p, zero) - ref).cwiseAbs().maxCoeff());
    }
    CAPTURE(errs[0]);
    CAPTURE(errs[1]);
    CAPTURE(errs[2]);
    CHECK(errs[1] < errs[0]);
    CHECK(errs[2] < errs[1]);
    CHECK(std::log2(errs[1] / errs[2]) >= 1.0);
  }
}

TEST_CASE("montroll weiss") {
  const double zeta = 2.0, c = 0.7, beta = 1.3;
  auto phi = [&](cd u) { return zeta / (u + zeta); };
  auto one = [](cd) { return cd(1.0); };
  auto psi = [&](cd k) { return cd(1.0 - std::pow(c, beta) * std::pow(std::abs(k.real()), beta)); };
  for (double k : {0.0, 0.3, 1.0}) {
    for (cd u : {cd(0.5), cd(1.0, 2.0)}) {
      const cd v = montroll_weiss(phi, psi, one, k, u);
      const cd expect = 1.0 / (u + zeta * std::pow(c, beta) * std::pow(k, beta));
      CHECK(std::abs(v - expect) < 1e-13);
    }
  }
  // Tempered jumps.
  const double lam = 0.4, bt = 0.7;
  auto psi_t = [&](cd k) {
    const double kk = k.real();
    return 1.0 - c * (std::pow(cd(lam, kk), bt) - std::pow(lam, bt)) - c * (std::pow(cd(lam, -kk), bt) - std::pow(lam, bt));
  };
  const cd u(0.8, 0.1);
  const double k = 0.9;
  const cd expect = 1.0 / (u + zeta * c * (std::pow(cd(lam, k), bt) + std::pow(cd(lam, -k), bt) - 2.0 * std::pow(lam, bt)));
  CHECK(std::abs(montroll_weiss(phi, psi_t, one, k, u) - expect) < 1e-13);
  // Total mass at k = 0 for other waiting-time laws.
  auto phi_sub = [](cd u) { return 1.0 - std::pow(0.5 * u, 0.6); };
  CHECK(std::abs(montroll_weiss(phi_sub, psi_t, one, 0.0, u) - 1.0 / u) < 1e-13);
  CHECK_THROWS_AS(montroll_weiss(phi, psi, one, 0.3, cd(-1.0)), Error);
  CHECK_THROWS_AS(montroll_weiss([](cd) { return cd(1.0); }, psi, one, 0.0, cd(1.0)), Error);
}

TEST_CASE("tempered identity") {
  std::vector<double> ks;
  for (double k = 0.1; k <= 10.0 + 1e-9; k *= std::pow(10.0, 0.25)) ks.push_back(k);
  const IdentityCheck one = verify_tempered_identity(1, 0.5, 1.0, ks);
  CHECK(one.max_rel_error <= 1e-6);
  const IdentityCheck zero = verify_tempered_identity(1, 0.5, 1.0, {0.0});
  CHECK(zero.quadrature[0] == 0.0);
  CHECK(zero.closed_form[0] == 0.0);
  const IdentityCheck two = verify_tempered_identity(2, 1.5, 0.3, {0.2, 1.0, 4.0});
  CHECK(two.max_rel_error <= 1e-5);
  CHECK_THROWS_AS(verify_tempered_identity(3, 0.5, 1.0, ks), Error);
}

TEST_CASE("energy equivalence") {
  PeriodicField z;
  z.length = 4.0;
  z.values.assign(64, 0.0);
  const auto [z1, z2] = energy_equivalence_check(z);
  CHECK(z1 == 0.0);
  CHECK(z2 == 0.0);

  const double length = 2.0 * std::numbers::pi;
  const auto [m1, m2] = energy_equivalence_check(mode_field(128, length, 6.0));
  CHECK(m1 == doctest::Approx(36.0 * 0.5 * length).epsilon(1e-12));
  CHECK(m2 == doctest::Approx(m1).epsilon(1e-12));

  std::mt19937_64 gen(11);
  std::normal_distribution<double> nd;
  PeriodicField r;
  r.length = 7.0;
  r.values.assign(256, 0.0);
  for (int q = 1; q < 40; ++q) {
    const double a = nd(gen), b = nd(gen), k = 2.0 * std::numbers::pi * q / r.length;
    for (std::size_t j = 0; j < r.size(); ++j) r.values[j] += a * std::cos(k * r.position(j)) + b * std::sin(k * r.position(j));
  }
  const auto [e1, e2] = energy_equivalence_check(r);
  CHECK(std::abs(e1 - e2) <= 1e-10 * e2);
}
