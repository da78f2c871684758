#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "isadre/rng.hpp"

namespace isadre::stats {

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double variance(std::span<const double> xs) {
  if (xs.size() < 2) throw std::invalid_argument("variance: need at least two samples");
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

inline double stderr_of_mean(std::span<const double> xs) {
  return std::sqrt(variance(xs) / static_cast<double>(xs.size()));
}

inline double std_normal_log_pdf(std::span<const double> x) {
  constexpr double kLog2Pi = 1.837877066409345483560659;
  double sq = 0.0;
  for (double v : x) sq += v * v;
  return -0.5 * (static_cast<double>(x.size()) * kLog2Pi + sq);
}

// Two-sample Kolmogorov-Smirnov distance (1-D).
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t ia = 0, ib = 0;
  double d = 0.0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] <= b[ib])
      ++ia;
    else
      ++ib;
    d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
  }
  return d;
}

// One-sample KS distance against a CDF.
inline double ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf) {
  if (a.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double c = cdf(a[i]);
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - c));
    d = std::max(d, std::abs(static_cast<double>(i) / n - c));
  }
  return d;
}

// Critical KS value: P(D > value) = alpha, two-sample asymptotic form.
inline double ks_two_sample_critical(std::size_t n, std::size_t m, double c_alpha) {
  return c_alpha * std::sqrt((static_cast<double>(n) + m) / (static_cast<double>(n) * m));
}

// Adaptive Simpson quadrature.
namespace detail {
inline double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                            double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int max_depth = 40) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = detail::simpson(a, fa, b, fb, fm);
  return detail::adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

// One-sided upper quantile of a bootstrap distribution of statistic(sample
// with replacement). Returns the q-quantile of the resampled statistics.
inline double bootstrap_quantile(std::span<const double> xs,
                                 const std::function<double(std::span<const double>)>& statistic,
                                 double q, int resamples, rngutil::Engine& rng) {
  if (xs.empty()) throw std::invalid_argument("bootstrap_quantile: empty sample");
  std::vector<double> stats(resamples);
  std::vector<double> resample(xs.size());
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const std::size_t j =
          static_cast<std::size_t>(rngutil::uniform01(rng) * static_cast<double>(xs.size()));
      resample[i] = xs[std::min(j, xs.size() - 1)];
    }
    stats[r] = statistic(resample);
  }
  std::sort(stats.begin(), stats.end());
  const double pos = q * static_cast<double>(resamples - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, stats.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return stats[lo] * (1.0 - frac) + stats[hi] * frac;
}

}  // namespace isadre::stats
