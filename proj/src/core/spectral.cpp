// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#include "spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>

#include "error.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace levyfrac {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_power_of_two(std::size_t m) { return m >= 2 && (m & (m - 1)) == 0; }

// Real-to-complex round trip; `spectral` edits the half spectrum in place (index j, wavenumber index).
template <class F>
std::vector<double> fft_roundtrip(const std::vector<double>& in, F&& spectral) {
  const int m = static_cast<int>(in.size());
  const int half = m / 2 + 1;
  double* buf = fftw_alloc_real(static_cast<std::size_t>(m));
  fftw_complex* spec = fftw_alloc_complex(static_cast<std::size_t>(half));
  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd = fftw_plan_dft_r2c_1d(m, buf, spec, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(m, spec, buf, FFTW_ESTIMATE);
  }
  std::copy(in.begin(), in.end(), buf);
  fftw_execute(fwd);
  for (int j = 0; j < half; ++j) {
    std::complex<double> z(spec[j][0], spec[j][1]);
    z = spectral(j, z);
    spec[j][0] = z.real();
    spec[j][1] = z.imag();
  }
  fftw_execute(bwd);
  std::vector<double> out(buf, buf + m);
  for (double& v : out) v /= m;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  fftw_free(buf);
  fftw_free(spec);
  return out;
}

}  // namespace

void PeriodicField::validate() const {
  require(is_power_of_two(values.size()), "periodic field: size must be a power of two");
  require(length > 0.0, "periodic field: length must be positive");
}

PeriodicField multiplier_apply(const PeriodicField& field, const std::function<double(double)>& symbol) {
  field.validate();
  const std::size_t m = field.size();
  PeriodicField out = field;
  out.values = fft_roundtrip(field.values, [&](int j, std::complex<double> z) {
    // The Nyquist coefficient is real for real data; keep it real.
    const double k = kTwoPi * j / field.length;
    return z * symbol(k);
  });
  (void)m;
  return out;
}

PeriodicField2D multiplier_apply_2d(const PeriodicField2D& field,
                                    const std::function<double(double, double)>& symbol) {
  require(is_power_of_two(field.mx) && is_power_of_two(field.my), "periodic field: sizes must be powers of two");
  require(field.values.size() == field.mx * field.my, "periodic field: value count mismatch");
  const int mx = static_cast<int>(field.mx), my = static_cast<int>(field.my);
  const int hx = mx / 2 + 1;
  double* buf = fftw_alloc_real(field.values.size());
  fftw_complex* spec = fftw_alloc_complex(static_cast<std::size_t>(hx * my));
  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd = fftw_plan_dft_r2c_2d(my, mx, buf, spec, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_2d(my, mx, spec, buf, FFTW_ESTIMATE);
  }
  std::copy(field.values.begin(), field.values.end(), buf);
  fftw_execute(fwd);
  for (int jy = 0; jy < my; ++jy) {
    const int sy = jy <= my / 2 ? jy : jy - my;
    const double ky = kTwoPi * sy / field.length_y;
    for (int jx = 0; jx < hx; ++jx) {
      const double kx = kTwoPi * jx / field.length_x;
      const double s = symbol(kx, ky);
      spec[jy * hx + jx][0] *= s;
      spec[jy * hx + jx][1] *= s;
    }
  }
  fftw_execute(bwd);
  PeriodicField2D out = field;
  const double scale = 1.0 / (static_cast<double>(mx) * my);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = buf[i] * scale;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  fftw_free(buf);
  fftw_free(spec);
  return out;
}

PeriodicField symbol_apply(const PeriodicField& field, const OperatorSpec& spec) {
  spec.validate();
  return multiplier_apply(field, [&](double k) { return spec.symbol(k); });
}

Eigen::VectorXd spectral_reference(const Grid1D& grid, const OperatorSpec& spec, const std::function<double(double)>& p,
                                   const SpectralOptions& opt) {
  grid.validate();
  spec.validate();
  require(spec.n == 1, "spectral_reference: one-dimensional operators only");
  require(opt.refine >= 1, "spectral_reference: refine must be >= 1");
  const double hf = grid.h() / static_cast<double>(opt.refine);
  std::size_t m = 2;
  while (static_cast<double>(m) * hf < opt.box_factor * (grid.b - grid.a)) m *= 2;
  PeriodicField field;
  field.origin = grid.a;
  field.length = static_cast<double>(m) * hf;
  field.values.resize(m);
  // Points beyond the right half of the box stand for negative offsets from a.
  double mass = 0.0, first = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double x = grid.a + static_cast<double>(j) * hf;
    if (j > m / 2) x -= field.length;
    field.values[j] = p(x);
    mass += field.values[j] * hf;
    first += field.values[j] * x * hf;
  }
  const PeriodicField out = symbol_apply(field, spec);
  const double centroid = mass != 0.0 ? first / mass : 0.5 * (grid.a + grid.b);
  const double c = spec.coefficient();
  auto far = [&](double d) { return c * mass * std::exp(-spec.lambda * d) * std::pow(d, -1.0 - spec.beta); };

  Eigen::VectorXd ref(static_cast<Eigen::Index>(grid.n));
  for (std::size_t i = 0; i < grid.n; ++i) {
    double v = out.values[(i + 1) * opt.refine];
    if (opt.image_correction && mass != 0.0) {
      const double x = grid.node(i) - centroid;
      const double big_l = field.length;
      double images = 0.0;
      constexpr int kImages = 2000;
      for (int q = 1; q <= kImages; ++q) images += far(q * big_l + x) + far(q * big_l - x);
      if (spec.lambda == 0.0) {
        const double edge = (kImages + 0.5) * big_l;
        images += c * mass * (std::pow(edge + x, -spec.beta) + std::pow(edge - x, -spec.beta)) / (spec.beta * big_l);
      }
      v -= images;
    }
    ref[static_cast<Eigen::Index>(i)] = v;
  }
  return ref;
}

std::complex<double> montroll_weiss(const ComplexFn& phi_hat, const ComplexFn& psi_hat, const ComplexFn& p0_hat,
                                    double k, std::complex<double> u) {
  require_domain(u.real() > 0.0, "montroll_weiss: requires Re u > 0");
  const std::complex<double> phi = phi_hat(u);
  const std::complex<double> psi = psi_hat(std::complex<double>(k, 0.0));
  require_domain(std::abs(psi) <= 1.0 + 1e-12, "montroll_weiss: requires |psi(k)| <= 1");
  const std::complex<double> den = 1.0 - phi * psi;
  if (std::abs(den) < 1e-14) fail(ErrorCode::numeric, "montroll_weiss: pole, |1 - phi psi| < 1e-14");
  return (1.0 - phi) / u * p0_hat(std::complex<double>(k, 0.0)) / den;
}

IdentityCheck verify_tempered_identity(int n, double beta, double lambda, const std::vector<double>& k_grid) {
  require(n == 1 || n == 2, "verify_tempered_identity: n must be 1 or 2");
  const double c = special::tempered_coeff(n, beta);
  IdentityCheck chk;
  for (double k : k_grid) {
    const double q = c * (n == 1 ? quad::symbol_integral_1d(beta, lambda, k) : quad::symbol_integral_2d(beta, lambda, k));
    const double s = special::tempered_symbol(n, beta, lambda, k);
    if (!std::isfinite(q)) fail(ErrorCode::convergence, "verify_tempered_identity: quadrature did not converge");
    const double e = (q == s) ? 0.0 : std::abs(q - s) / std::max(std::abs(s), 1e-300);
    chk.k.push_back(k);
    chk.quadrature.push_back(q);
    chk.closed_form.push_back(s);
    chk.rel_error.push_back(e);
    chk.max_rel_error = std::max(chk.max_rel_error, e);
  }
  return chk;
}

std::pair<double, double> energy_equivalence_check(const PeriodicField& field) {
  field.validate();
  const int m = static_cast<int>(field.size());
  const double big_l = field.length;
  // Nyquist content is dropped in both so that the two operators see the same band.
  const std::vector<double> half = fft_roundtrip(field.values, [&](int j, std::complex<double> z) {
    if (j == m / 2) return std::complex<double>(0.0, 0.0);
    return z * (-kTwoPi * j / big_l);
  });
  const std::vector<double> grad = fft_roundtrip(field.values, [&](int j, std::complex<double> z) {
    if (j == m / 2) return std::complex<double>(0.0, 0.0);
    return z * std::complex<double>(0.0, kTwoPi * j / big_l);
  });
  double e1 = 0.0, e2 = 0.0;
  for (int j = 0; j < m; ++j) {
    e1 += half[static_cast<std::size_t>(j)] * half[static_cast<std::size_t>(j)];
    e2 += grad[static_cast<std::size_t>(j)] * grad[static_cast<std::size_t>(j)];
  }
  return {e1 * field.spacing(), e2 * field.spacing()};
}

void write_identity_csv(const std::string& path, int n, double beta, double lambda, const IdentityCheck& chk,
                        bool header) {
  std::ofstream os(path, header ? std::ios::trunc : std::ios::app);
  if (!os) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  os.precision(17);
  if (header) os << "n,beta,lambda,k,quadrature,closed_form,rel_error\n";
  for (std::size_t i = 0; i < chk.k.size(); ++i) {
    os << n << ',' << beta << ',' << lambda << ',' << chk.k[i] << ',' << chk.quadrature[i] << ','
       << chk.closed_form[i] << ',' << chk.rel_error[i] << '\n';
  }
  if (!os) fail(ErrorCode::io, "write to '" + path + "' failed");
}

}  // namespace levyfrac
