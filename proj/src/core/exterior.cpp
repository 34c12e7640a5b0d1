// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#include "exterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace levyfrac {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

double radius(Point p) { return std::hypot(p.x, p.y); }

}  // namespace

double default_truncation_radius(const Box& omega) { return 50.0 * omega.width(); }

GrowthCheck check_growth(const ExteriorData& g, const OperatorSpec& spec, const Box& omega, double t) {
  require(static_cast<bool>(g.value), "check_growth: exterior data has no evaluator");
  require(g.envelope_onset > 0.0, "check_growth: envelope onset M must be positive");
  const double big_r = g.truncation_radius > 0.0 ? g.truncation_radius : default_truncation_radius(omega);
  auto envelope = [&](double r) {
    if (g.growth_kind == GrowthKind::polynomial) return std::pow(r, spec.beta - g.epsilon);
    return std::exp((spec.lambda - g.epsilon) * r);
  };
  std::vector<Point> dirs = {{1, 0}, {-1, 0}};
  if (omega.dim == 2) {
    const double s = std::sqrt(0.5);
    dirs.insert(dirs.end(), {{0, 1}, {0, -1}, {s, s}, {-s, s}, {s, -s}, {-s, -s}});
  }

  // Without a declared constant, C is the largest ratio |g|/envelope seen up to R; the
  // samples beyond R (up to 16 R) must then respect C times the envelope.
  GrowthCheck out;
  double c = g.envelope_constant;
  const bool infer = c <= 0.0;
  for (double r = g.envelope_onset; r <= 16.0 * big_r * (1.0 + 1e-12); r *= 2.0) {
    double worst = 0.0;
    for (const Point d : dirs) {
      const Point x{d.x * r, d.y * r};
      if (omega.contains(x)) continue;
      const double v = std::abs(g(x, t));
      if (!std::isfinite(v)) {
        out.pass = false;
        out.witness_radius = r;
        out.witness_value = v;
        return out;
      }
      worst = std::max(worst, v);
    }
    const double env = envelope(r);
    if (infer && r <= big_r) {
      c = std::max(c, worst / env);
      continue;
    }
    if (worst > c * env * (1.0 + 1e-9)) {
      out.pass = false;
      out.constant = c;
      out.witness_radius = r;
      out.witness_value = worst;
      out.envelope_value = c * env;
      return out;
    }
  }
  out.constant = c;
  return out;
}

ExteriorData make_data(const std::string& name, const std::map<std::string, double>& p) {
  ExteriorData d;
  d.name = name;
  if (name == "zero") {
    d.value = [](Point, double) { return 0.0; };
  } else if (name == "one") {
    d.value = [](Point, double) { return 1.0; };
  } else if (name == "indicator") {
    const double lo = param(p, "lo", -kInf);
    const double hi = param(p, "hi", kInf);
    require(lo < hi, "indicator: requires lo < hi");
    d.value = [lo, hi](Point x, double) { return (x.x >= lo && x.x < hi) ? 1.0 : 0.0; };
    if (std::isfinite(lo)) d.breakpoints.push_back(lo);
    if (std::isfinite(hi)) d.breakpoints.push_back(hi);
  } else if (name == "power") {
    const double e = param(p, "p", 1.0);
    const double scale = param(p, "scale", 1.0);
    d.value = [e, scale](Point x, double) { return scale * std::pow(radius(x), e); };
  } else if (name == "exponential") {
    const double rate = param(p, "rate", 0.0);
    d.value = [rate](Point x, double) { return std::exp(rate * radius(x)); };
    d.growth_kind = GrowthKind::exponential;
  } else if (name == "exp-decay") {
    const double c = param(p, "c", 1.0);
    require(c >= 0.0, "exp-decay: c must be non-negative");
    d.value = [c](Point x, double) { return std::exp(-c * radius(x)); };
  } else if (name == "bump") {
    const Point center{param(p, "center", 0.0), param(p, "center_y", 0.0)};
    const double width = param(p, "width", 1.0);
    const double amp = param(p, "amp", 1.0);
    require(width > 0.0, "bump: width must be positive");
    d.value = [center, width, amp](Point x, double) {
      const double r = std::hypot(x.x - center.x, x.y - center.y) / width;
      return r < 1.0 ? amp * std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
    };
  } else {
    fail(ErrorCode::invalid_argument, "unknown data name '" + name + "'");
  }
  if (p.count("epsilon")) d.epsilon = p.at("epsilon");
  if (p.count("radius")) d.truncation_radius = p.at("radius");
  return d;
}

const std::vector<std::string>& data_names() {
  static const std::vector<std::string> names = {"zero",        "one",       "indicator", "power",
                                                 "exponential", "exp-decay", "bump"};
  return names;
}

ExteriorData sum_data(const std::vector<ExteriorData>& parts) {
  require(!parts.empty(), "sum_data: no parts");
  ExteriorData d = parts.front();
  std::vector<std::function<double(Point, double)>> fs;
  for (const auto& q : parts) {
    fs.push_back(q.value);
    if (&q != &parts.front()) {
      d.breakpoints.insert(d.breakpoints.end(), q.breakpoints.begin(), q.breakpoints.end());
      d.time_independent = d.time_independent && q.time_independent;
      if (q.growth_kind == GrowthKind::exponential) d.growth_kind = GrowthKind::exponential;
      d.name += "+" + q.name;
    }
  }
  d.value = [fs](Point x, double t) {
    double s = 0.0;
    for (const auto& f : fs) s += f(x, t);
    return s;
  };
  return d;
}

}  // namespace levyfrac
