#pragma once

// Test-only oracles, independent of the library's implementation paths.

#include <cmath>
#include <functional>
#include <vector>

#include "isadre/rng.hpp"

namespace testsup {

// Marginal law of the linear deterministic interpolant between N(0,1) and
// N(1,1): x_t = (1-t) x0 + t x1 with independent endpoints, so
// x_t ~ N(t, (1-t)^2 + t^2). Everything below is derived from that normal
// density alone.
struct Gauss1DPath {
  double mean(double t) const { return t; }
  double var(double t) const { return (1.0 - t) * (1.0 - t) + t * t; }
  double dvar(double t) const { return 4.0 * t - 2.0; }

  double log_pdf(double x, double t) const {
    const double v = var(t);
    const double r = x - mean(t);
    return -0.5 * (std::log(2.0 * M_PI * v)) - 0.5 * r * r / v;
  }

  // d/dt log p_t(x) by direct differentiation of the normal log density.
  double tangent(double x, double t) const {
    const double v = var(t);
    const double dv = dvar(t);
    const double r = x - mean(t);
    return -0.5 * dv / v + r / v + 0.5 * r * r * dv / (v * v);
  }

  // Exact secant via the log-density increment.
  double secant(double x, double l, double t) const {
    if (l == t) return tangent(x, t);
    return (log_pdf(x, t) - log_pdf(x, l)) / (t - l);
  }
};

// Composite Simpson on a fixed grid; deliberately different from the
// library's adaptive rule.
inline double simpson_fixed(const std::function<double(double)>& f, double a, double b,
                            int panels = 512) {
  const double h = (b - a) / (2.0 * panels);
  double acc = f(a) + f(b);
  for (int i = 1; i < 2 * panels; ++i) acc += f(a + h * i) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a) + std::abs(b), 1e-3);
}

}  // namespace testsup
