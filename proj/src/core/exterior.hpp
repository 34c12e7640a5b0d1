// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "types.hpp"

namespace levyfrac {

enum class GrowthKind { polynomial, exponential };

/// Data on the complement of the domain (or a forcing term on the domain itself).
struct ExteriorData {
  std::function<double(Point, double)> value;
  GrowthKind growth_kind = GrowthKind::polynomial;
  double epsilon = 0.05;
  double truncation_radius = 0.0;  // 0: 50 * domain width
  double envelope_constant = 0.0;  // 0: inferred from the first sample
  double envelope_onset = 1.0;     // M
  bool time_independent = true;
  std::vector<double> breakpoints;  // jump locations along an axis
  std::string name;

  double operator()(Point p, double t = 0.0) const { return value(p, t); }
};

struct GrowthCheck {
  bool pass = true;
  double constant = 0.0;
  double witness_radius = 0.0;
  double witness_value = 0.0;
  double envelope_value = 0.0;
};

/// Samples |g| on dyadic radii M 2^k up to 16 R and compares against the declared envelope
/// r^(beta - eps) or exp((lambda - eps) r). Without a declared constant, C is inferred from the
/// samples up to R. The first violation is returned as witness.
GrowthCheck check_growth(const ExteriorData& g, const OperatorSpec& spec, const Box& omega, double t = 0.0);

/// Built-in data: zero, one, indicator(lo, hi), power(p), exponential(rate), exp-decay(c),
/// bump(center, width, amp). Indicators are half-open [lo, hi) in the x coordinate;
/// the others depend on |X| (bump on |X - center|).
ExteriorData make_data(const std::string& name, const std::map<std::string, double>& params = {});

/// Names accepted by make_data.
const std::vector<std::string>& data_names();

/// Sum of several data, breakpoints merged.
ExteriorData sum_data(const std::vector<ExteriorData>& parts);

double default_truncation_radius(const Box& omega);

}  // namespace levyfrac
