// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#include "operators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "error.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace levyfrac {

// ---------------------------------------------------------------------------------------------
// Specs and grids

void OperatorSpec::validate() const {
  require(n == 1 || n == 2, "operator: dimension n must be 1 or 2");
  require_domain(beta > 0.0 && beta < 2.0, "operator: beta must lie in (0,2)");
  if (kind == OperatorKind::fractional) {
    require(lambda == 0.0, "operator: fractional kind requires lambda = 0");
  } else {
    require_domain(lambda > 0.0, "operator: tempered kind requires lambda > 0");
    require_domain(beta != 1.0, "operator: tempered kind excludes beta = 1");
  }
}

double OperatorSpec::coefficient() const {
  validate();
  if (kind == OperatorKind::fractional) return special::frac_lap_coeff(n, beta);
  return std::abs(special::tempered_coeff(n, beta));
}

double OperatorSpec::symbol(double k) const {
  validate();
  if (kind == OperatorKind::fractional) return special::fractional_symbol(beta, k);
  const double s = special::tempered_symbol(n, beta, lambda, k);
  return special::tempered_coeff(n, beta) > 0.0 ? s : -s;
}

std::string OperatorSpec::describe() const {
  std::ostringstream os;
  os << (kind == OperatorKind::fractional ? "fractional" : "tempered") << "(beta=" << beta;
  if (kind == OperatorKind::tempered) os << ", lambda=" << lambda;
  os << ", n=" << n << ")";
  return os.str();
}

Grid1D::Grid1D(double a_, double b_, std::size_t n_) : a(a_), b(b_), n(n_) { validate(); }

void Grid1D::validate() const {
  require(std::isfinite(a) && std::isfinite(b) && a < b, "grid: requires finite a < b");
  require(n >= 1, "grid: requires N >= 1");
}

// ---------------------------------------------------------------------------------------------
// Kernel integrals

namespace {

double raw_mass(const OperatorSpec& spec, double lo, double hi) {
  return special::power_exp_integral(-spec.beta, spec.lambda, lo, hi);
}

// Raw kernel mass of a cell. Narrow tempered cells use 3-point Gauss-Legendre, which is at
// round-off level once the cell width is a small fraction of its distance from the origin.
double cell_mass(const OperatorSpec& spec, double lo, double hi) {
  if (spec.lambda == 0.0) {
    return (std::pow(lo, -spec.beta) - std::pow(hi, -spec.beta)) / spec.beta;
  }
  if (hi - lo <= 0.05 * lo) {
    static const double x = std::sqrt(0.6);
    const double m = 0.5 * (lo + hi);
    const double r = 0.5 * (hi - lo);
    auto f = [&](double y) { return std::exp(-spec.lambda * y) * std::pow(y, -1.0 - spec.beta); };
    return r * (5.0 / 9.0 * (f(m - r * x) + f(m + r * x)) + 8.0 / 9.0 * f(m));
  }
  return raw_mass(spec, lo, hi);
}

}  // namespace

double kernel_integral(const OperatorSpec& spec, double lo, double hi) {
  return spec.coefficient() * raw_mass(spec, lo, hi);
}

KernelWeights kernel_weights(const OperatorSpec& spec, double h, std::size_t n) {
  spec.validate();
  require(h > 0.0 && n >= 1, "kernel_weights: requires h > 0 and N >= 1");
  const double c = spec.coefficient();
  const double b = spec.beta;
  // Moments of xi^(1-beta) w and xi^(2-beta) w over [k h, (k+1) h].
  std::vector<double> m2(n + 1), m3(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double lo = static_cast<double>(k) * h;
    const double hi = static_cast<double>(k + 1) * h;
    m2[k] = special::power_exp_integral(2.0 - b, spec.lambda, lo, hi);
    m3[k] = special::power_exp_integral(3.0 - b, spec.lambda, lo, hi);
  }
  KernelWeights w;
  w.interior.resize(n);
  w.boundary.resize(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const double rise = k == 1 ? m2[0] : (m3[k - 1] - (kd - 1.0) * h * m2[k - 1]) / h;
    const double fall = ((kd + 1.0) * h * m2[k] - m3[k]) / h;
    const double q = c / (kd * h * kd * h);
    w.interior[k - 1] = q * (rise + fall);
    w.boundary[k - 1] = q * rise;
  }
  return w;
}

// ---------------------------------------------------------------------------------------------
// Exterior source along one grid line

class LineSource {
 public:
  LineSource(const Grid1D& grid, const OperatorSpec& spec, std::vector<double> boundary, double radius,
             double grading)
      : grid_(grid), spec_(spec), c_(spec.coefficient()), radius_(radius), bw_(std::move(boundary)) {
    require(grading > 0.0 && grading < 0.5, "exterior grading must lie in (0, 0.5)");
    require(radius > 0.0, "exterior truncation radius must be positive");
    const double h = grid.h();
    mesh_.push_back(0.0);
    while (mesh_.back() < radius) {
      const double s = mesh_.back();
      mesh_.push_back(std::min(radius, s + grading * (s + h)));
      if (radius - mesh_.back() < 0.25 * grading * (mesh_.back() + h)) mesh_.back() = radius;
    }
  }

  double radius() const { return radius_; }
  const Grid1D& grid() const { return grid_; }

  /// g_line maps the coordinate along the line to the data value.
  Eigen::VectorXd build(const std::function<double(double)>& g_line, const std::vector<double>& breakpoints,
                        double* error_estimate) const {
    ensure();
    const std::size_t n = grid_.n;
    const std::size_t cells = mesh_.size() - 1;
    const double a = grid_.a, b = grid_.b, h = grid_.h();
    Eigen::VectorXd left(cells), right(cells);
    for (std::size_t j = 0; j < cells; ++j) {
      const double mid = 0.5 * (mesh_[j] + mesh_[j + 1]);
      left[j] = g_line(a - mid);
      right[j] = g_line(b + mid);
    }
    const double trace_a = g_line(std::nextafter(a, -special::kInf));
    const double trace_b = g_line(std::nextafter(b, special::kInf));
    const double far_a = g_line(a - radius_);
    const double far_b = g_line(b + radius_);

    // Split cells at declared jumps of the data.
    std::map<std::size_t, std::vector<double>> split_l, split_r;
    for (double bp : breakpoints) {
      if (bp < a && a - bp < radius_) add_split(split_l, a - bp);
      if (bp > b && bp - b < radius_) add_split(split_r, bp - b);
    }

    Eigen::VectorXd out(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t ml = i + 1, mr = n - i;
      double s = bw_[ml - 1] * trace_a + bw_[mr - 1] * trace_b;
      s += w_.row(ml - 1).dot(left) + w_.row(mr - 1).dot(right);
      s += far_[ml - 1] * far_a + far_[mr - 1] * far_b;
      s += correction(split_l, static_cast<double>(ml) * h, [&](double t) { return g_line(a - t); });
      s += correction(split_r, static_cast<double>(mr) * h, [&](double t) { return g_line(b + t); });
      out[static_cast<Eigen::Index>(i)] = s;
    }

    if (error_estimate) {
      // Variation of g over dyadic shells beyond R, weighted by the kernel mass there.
      double worst = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double e = 0.0;
        for (int side = 0; side < 2; ++side) {
          const double d = static_cast<double>(side == 0 ? i + 1 : n - i) * h;
          const double g_r = side == 0 ? far_a : far_b;
          for (double r = radius_; r < 16.0 * radius_ * (1.0 - 1e-12); r *= 2.0) {
            const double y0 = side == 0 ? g_line(a - r) : g_line(b + r);
            const double y1 = side == 0 ? g_line(a - 2 * r) : g_line(b + 2 * r);
            const double var = std::max(std::abs(y0 - g_r), std::abs(y1 - g_r));
            e += c_ * var * raw_mass(spec_, d + r, d + 2 * r);
          }
        }
        worst = std::max(worst, e);
      }
      *error_estimate = worst;
    }
    return out;
  }

 private:
  void add_split(std::map<std::size_t, std::vector<double>>& split, double s) const {
    const auto it = std::upper_bound(mesh_.begin(), mesh_.end(), s);
    const auto j = static_cast<std::size_t>(it - mesh_.begin()) - 1;
    if (mesh_[j] == s) return;
    split[j].push_back(s);
  }

  double correction(const std::map<std::size_t, std::vector<double>>& split, double d,
                    const std::function<double(double)>& g) const {
    double s = 0.0;
    const Eigen::Index row = static_cast<Eigen::Index>(std::llround(d / grid_.h())) - 1;
    for (const auto& [j, pts] : split) {
      std::vector<double> edges = {mesh_[j]};
      std::vector<double> inner = pts;
      std::sort(inner.begin(), inner.end());
      edges.insert(edges.end(), inner.begin(), inner.end());
      edges.push_back(mesh_[j + 1]);
      s -= w_(row, static_cast<Eigen::Index>(j)) * g(0.5 * (mesh_[j] + mesh_[j + 1]));
      for (std::size_t q = 0; q + 1 < edges.size(); ++q) {
        if (edges[q + 1] <= edges[q]) continue;
        s += c_ * cell_mass(spec_, d + edges[q], d + edges[q + 1]) * g(0.5 * (edges[q] + edges[q + 1]));
      }
    }
    return s;
  }

  void ensure() const {
    std::call_once(once_, [this] {
      const std::size_t n = grid_.n;
      const std::size_t cells = mesh_.size() - 1;
      const double h = grid_.h();
      w_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cells));
      far_.resize(static_cast<Eigen::Index>(n));
      std::vector<double> f(mesh_.size());
      for (std::size_t m = 1; m <= n; ++m) {
        const double d = static_cast<double>(m) * h;
        const auto r = static_cast<Eigen::Index>(m - 1);
        if (spec_.lambda == 0.0) {
          for (std::size_t j = 0; j < mesh_.size(); ++j) f[j] = std::pow(d + mesh_[j], -spec_.beta);
          for (std::size_t j = 0; j < cells; ++j) {
            w_(r, static_cast<Eigen::Index>(j)) = c_ * (f[j] - f[j + 1]) / spec_.beta;
          }
        } else {
          for (std::size_t j = 0; j < cells; ++j) {
            w_(r, static_cast<Eigen::Index>(j)) = c_ * cell_mass(spec_, d + mesh_[j], d + mesh_[j + 1]);
          }
        }
        far_[r] = c_ * raw_mass(spec_, d + radius_, special::kInf);
      }
    });
  }

  Grid1D grid_;
  OperatorSpec spec_;
  double c_;
  double radius_;
  std::vector<double> bw_;
  std::vector<double> mesh_;
  mutable std::once_flag once_;
  mutable Eigen::MatrixXd w_;
  mutable Eigen::VectorXd far_;
};

// ---------------------------------------------------------------------------------------------
// Assembly

namespace {

void add_conditioning_warning(const OperatorSpec& spec, std::vector<std::string>& warnings) {
  if (spec.beta < 0.05 || spec.beta > 1.95) {
    warnings.push_back("beta=" + std::to_string(spec.beta) +
                       " lies outside [0.05, 1.95]; the discrete operator is poorly conditioned");
  }
}

}  // namespace

DiscreteOperator assemble(const Grid1D& grid, const OperatorSpec& spec, const AssembleOptions& opt) {
  grid.validate();
  spec.validate();
  require(spec.n == 1, "assemble: one-dimensional grids need an operator with n = 1");
  const std::size_t n = grid.n;
  const auto ni = static_cast<Eigen::Index>(n);
  const double h = grid.h();
  const double c = spec.coefficient();
  const KernelWeights kw = kernel_weights(spec, h, n);

  DiscreteOperator op;
  op.dim_ = 1;
  op.matrix_.setZero(ni, ni);
  for (Eigen::Index i = 0; i < ni; ++i) {
    double diag = 0.0;
    for (Eigen::Index j = 0; j < ni; ++j) {
      if (j == i) continue;
      const double w = kw.interior[static_cast<std::size_t>(std::abs(i - j)) - 1];
      op.matrix_(i, j) = w;
      diag += w;
    }
    op.matrix_(i, i) = -diag;
  }
  op.exterior_tail_.resize(ni);
  op.tail_.resize(ni);
  for (std::size_t i = 0; i < n; ++i) {
    const double dl = static_cast<double>(i + 1) * h;
    const double dr = static_cast<double>(n - i) * h;
    const double t = c * (raw_mass(spec, dl, special::kInf) + raw_mass(spec, dr, special::kInf));
    const auto ii = static_cast<Eigen::Index>(i);
    op.exterior_tail_[ii] = t;
    op.tail_[ii] = t + kw.boundary[i] + kw.boundary[n - 1 - i];
    op.nodes_.push_back({grid.node(i), 0.0});
  }
  op.specs_ = {spec};
  op.grids_ = {grid};
  op.box_ = Box{grid.a, grid.b, 0.0, 0.0, 1};
  add_conditioning_warning(spec, op.warnings_);
  if (opt.with_exterior) {
    op.lines_.push_back(std::make_shared<const LineSource>(grid, spec, kw.boundary,
                                                           opt.radius_factor * (grid.b - grid.a), opt.grading));
  }
  return op;
}

DiscreteOperator assemble_hv(const Grid2D& grid, const OperatorSpec& sx, const OperatorSpec& sy,
                             const AssembleOptions& opt) {
  grid.validate();
  const DiscreteOperator ox = assemble(grid.x, sx, opt);
  const DiscreteOperator oy = assemble(grid.y, sy, opt);
  const auto n1 = static_cast<Eigen::Index>(grid.x.n);
  const auto n2 = static_cast<Eigen::Index>(grid.y.n);
  const Eigen::Index total = n1 * n2;

  DiscreteOperator op;
  op.dim_ = 2;
  op.matrix_.setZero(total, total);
  op.tail_.resize(total);
  op.exterior_tail_.resize(total);
  for (Eigen::Index j = 0; j < n2; ++j) {
    for (Eigen::Index i = 0; i < n1; ++i) {
      const Eigen::Index r = i + n1 * j;
      for (Eigen::Index q = 0; q < n1; ++q) op.matrix_(r, q + n1 * j) += ox.matrix_(i, q);
      for (Eigen::Index q = 0; q < n2; ++q) op.matrix_(r, i + n1 * q) += oy.matrix_(j, q);
      op.tail_[r] = ox.tail_[i] + oy.tail_[j];
      op.exterior_tail_[r] = ox.exterior_tail_[i] + oy.exterior_tail_[j];
      op.nodes_.push_back({ox.nodes_[static_cast<std::size_t>(i)].x, oy.nodes_[static_cast<std::size_t>(j)].x});
    }
  }
  op.specs_ = {sx, sy};
  op.grids_ = {grid.x, grid.y};
  op.box_ = Box{grid.x.a, grid.x.b, grid.y.a, grid.y.b, 2};
  op.warnings_ = ox.warnings_;
  op.warnings_.insert(op.warnings_.end(), oy.warnings_.begin(), oy.warnings_.end());
  op.lines_ = {ox.lines_.empty() ? nullptr : ox.lines_[0], oy.lines_.empty() ? nullptr : oy.lines_[0]};
  if (!opt.with_exterior) op.lines_.clear();
  return op;
}

// ---------------------------------------------------------------------------------------------
// Action

SourceResult DiscreteOperator::exterior_source(const ExteriorData& g, double t) const {
  require(!lines_.empty(), "exterior_source: operator was assembled without exterior support");
  require(static_cast<bool>(g.value), "exterior_source: exterior data has no evaluator");
  OperatorSpec envelope_spec = specs_[0];
  for (const auto& s : specs_) envelope_spec.beta = std::min(envelope_spec.beta, s.beta);
  const GrowthCheck gc = check_growth(g, envelope_spec, box_, t);
  if (!gc.pass) {
    std::ostringstream os;
    os << "exterior data '" << g.name << "' violates its growth envelope at radius " << gc.witness_radius
       << " (|g|=" << gc.witness_value << " > " << gc.envelope_value << ")";
    fail(ErrorCode::domain, os.str());
  }

  // Data may ask for its own truncation radius; build a matching line source if so.
  auto line_for = [&](int axis) -> std::shared_ptr<const LineSource> {
    const auto& base = lines_[static_cast<std::size_t>(axis)];
    if (g.truncation_radius <= 0.0 || g.truncation_radius == base->radius()) return base;
    const Grid1D& gr = grids_[static_cast<std::size_t>(axis)];
    const OperatorSpec& sp = specs_[static_cast<std::size_t>(axis)];
    return std::make_shared<const LineSource>(gr, sp, kernel_weights(sp, gr.h(), gr.n).boundary,
                                              g.truncation_radius, AssembleOptions{}.grading);
  };

  SourceResult out;
  if (dim_ == 1) {
    const auto line = line_for(0);
    out.values = line->build([&](double x) { return g({x, 0.0}, t); }, g.breakpoints, &out.error_estimate);
    return out;
  }
  const auto lx = line_for(0);
  const auto ly = line_for(1);
  const auto n1 = static_cast<Eigen::Index>(grids_[0].n);
  const auto n2 = static_cast<Eigen::Index>(grids_[1].n);
  out.values.setZero(n1 * n2);
  for (Eigen::Index j = 0; j < n2; ++j) {
    const double y = grids_[1].node(static_cast<std::size_t>(j));
    double e = 0.0;
    const Eigen::VectorXd s = lx->build([&](double x) { return g({x, y}, t); }, g.breakpoints, &e);
    out.error_estimate = std::max(out.error_estimate, e);
    for (Eigen::Index i = 0; i < n1; ++i) out.values[i + n1 * j] += s[i];
  }
  for (Eigen::Index i = 0; i < n1; ++i) {
    const double x = grids_[0].node(static_cast<std::size_t>(i));
    double e = 0.0;
    const Eigen::VectorXd s = ly->build([&](double y) { return g({x, y}, t); }, g.breakpoints, &e);
    out.error_estimate = std::max(out.error_estimate, e);
    for (Eigen::Index j = 0; j < n2; ++j) out.values[i + n1 * j] += s[j];
  }
  return out;
}

Eigen::VectorXd DiscreteOperator::apply(const Eigen::VectorXd& p, const ExteriorData& g, double t) const {
  require(static_cast<std::size_t>(p.size()) == size(),
          "apply: vector length " + std::to_string(p.size()) + " does not match operator size " +
              std::to_string(size()));
  Eigen::VectorXd out = matrix_ * p - tail_.cwiseProduct(p);
  out += exterior_source(g, t).values;
  return out;
}

void DiscreteOperator::write_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  os.precision(17);
  os << "row,col,value\n";
  for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix_.cols(); ++j) {
      if (matrix_(i, j) != 0.0) os << i << ',' << j << ',' << matrix_(i, j) << '\n';
    }
  }
  if (!os) fail(ErrorCode::io, "write to '" + path + "' failed");
}

SourceResult exterior_source(const Grid1D& grid, const OperatorSpec& spec, const ExteriorData& g, double t) {
  return assemble(grid, spec).exterior_source(g, t);
}

// ---------------------------------------------------------------------------------------------
// Riesz-form oracle

Eigen::VectorXd riesz_apply(const Grid1D& grid, double beta, const std::function<double(double)>& p, double lo,
                            double hi, double delta) {
  require_domain(beta > 1.0 && beta < 2.0, "riesz_apply: beta must lie in (1,2)");
  require(lo < hi, "riesz_apply: requires lo < hi");
  const double coef = -1.0 / (2.0 * std::cos(0.5 * beta * std::numbers::pi) * special::gamma(2.0 - beta));
  // y = x +- t^m with m = 1/(2-beta) turns |x-y|^(1-beta) dy into m dt.
  const double m = 1.0 / (2.0 - beta);
  auto one_side = [&](double x, double len, double dir) {
    if (len <= 0.0) return 0.0;
    auto f = [&](double t) { return m * p(x + dir * std::pow(t, m)); };
    return quad::gauss_kronrod(f, 0.0, std::pow(len, 1.0 / m), 1e-13);
  };
  auto potential = [&](double x) {
    if (x <= lo) return one_side(x, hi - x, 1.0) - one_side(x, lo - x, 1.0);
    if (x >= hi) return one_side(x, x - lo, -1.0) - one_side(x, x - hi, -1.0);
    return one_side(x, hi - x, 1.0) + one_side(x, x - lo, -1.0);
  };
  if (delta <= 0.0) delta = grid.h();
  Eigen::VectorXd out(static_cast<Eigen::Index>(grid.n));
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.node(i);
    const double i0 = potential(x);
    auto second = [&](double d) { return (potential(x + d) - 2.0 * i0 + potential(x - d)) / (d * d); };
    const double d1 = second(delta), d2 = second(0.5 * delta), d3 = second(0.25 * delta);
    const double r1 = (4.0 * d2 - d1) / 3.0, r2 = (4.0 * d3 - d2) / 3.0;
    out[static_cast<Eigen::Index>(i)] = coef * (16.0 * r2 - r1) / 15.0;
  }
  return out;
}

}  // namespace levyfrac
