#pragma once

#include <functional>
#include <span>
#include <vector>

#include "isadre/net.hpp"

namespace isadre {

// Knots 0 = t_0 < t_1 < ... < t_K = 1. K is the number of function
// evaluations of the any-step estimator.
struct Partition {
  std::vector<double> knots;

  static Partition uniform(int K);
  void validate() const;
  int nfe() const { return static_cast<int>(knots.size()) - 1; }
};

using SecantFn = std::function<double(std::span<const double>, double, double)>;
using TangentFn = std::function<double(std::span<const double>, double)>;

// Sum_k (t_{k+1} - t_k) * u(x, t_k, t_{k+1}). x is held fixed across the
// partition; only the interval endpoints vary.
double log_ratio_secant(const SecantFn& u, std::span<const double> x, const Partition& partition);
double log_ratio_secant(const SecantNet& net, std::span<const double> x,
                        const Partition& partition);

// Trapezoidal estimate of int_0^1 s(x, tau) dtau on K >= 2 uniform knots.
double log_ratio_tangent_quadrature(const TangentFn& s, std::span<const double> x, int K);
double log_ratio_tangent_quadrature(const SecantNet& net, std::span<const double> x, int K);

// log p1(x) ~= log r(x) + log p0(x).
double log_density(const SecantFn& u, std::span<const double> x,
                   const std::function<double(std::span<const double>)>& base_log_pdf,
                   const Partition& partition);
double log_density(const SecantNet& net, std::span<const double> x,
                   const std::function<double(std::span<const double>)>& base_log_pdf,
                   const Partition& partition);

struct MiEstimate {
  double mi = 0.0;
  double stderr_ = 0.0;
  int n = 0;
};

// Mean log-ratio over joint samples plus its standard error.
MiEstimate estimate_mi(const SecantFn& u, std::span<const std::vector<double>> joint_samples,
                       const Partition& partition);
MiEstimate estimate_mi(const SecantNet& net, std::span<const std::vector<double>> joint_samples,
                       const Partition& partition);

SecantFn secant_fn(const SecantNet& net);
TangentFn tangent_fn(const SecantNet& net);

}  // namespace isadre
