// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <string>

namespace levyfrac {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class OperatorKind { fractional, tempered };

/// Which nonlocal operator: Delta^{beta/2} or (Delta + lambda)^{beta/2}.
struct OperatorSpec {
  OperatorKind kind = OperatorKind::fractional;
  double beta = 1.0;
  double lambda = 0.0;
  int n = 1;

  static OperatorSpec fractional(double beta, int n = 1) { return {OperatorKind::fractional, beta, 0.0, n}; }
  static OperatorSpec tempered(double beta, double lambda, int n = 1) {
    return {OperatorKind::tempered, beta, lambda, n};
  }

  void validate() const;

  /// Positive kernel constant of the generator, c_{n,beta} or |c_{n,beta,lambda}|.
  double coefficient() const;

  /// Fourier multiplier of the generator (non-positive).
  double symbol(double k) const;

  std::string describe() const;
};

/// Uniform grid on (a, b) with N interior nodes x_i = a + i h, i = 1..N.
struct Grid1D {
  double a = 0.0;
  double b = 1.0;
  std::size_t n = 1;

  Grid1D() = default;
  Grid1D(double a_, double b_, std::size_t n_);
  double h() const { return (b - a) / static_cast<double>(n + 1); }
  /// Zero-based: node(0) = a + h.
  double node(std::size_t i) const { return a + static_cast<double>(i + 1) * h(); }
  void validate() const;
};

struct Grid2D {
  Grid1D x;
  Grid1D y;
  std::size_t size() const { return x.n * y.n; }
  void validate() const {
    x.validate();
    y.validate();
  }
};

/// Axis-aligned box; the y extent is unused in one dimension.
struct Box {
  double ax = 0.0, bx = 1.0;
  double ay = 0.0, by = 0.0;
  int dim = 1;
  bool contains(Point p) const {
    const bool in_x = p.x > ax && p.x < bx;
    return dim == 1 ? in_x : in_x && p.y > ay && p.y < by;
  }
  double width() const { return dim == 1 ? bx - ax : std::max(bx - ax, by - ay); }
};

}  // namespace levyfrac
