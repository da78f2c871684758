#pragma once

#include <span>
#include <vector>

namespace isadre {

enum class ScheduleKind { Linear, VariancePreserving };

// Interpolation coefficients alpha(t), beta(t) on [0,1] with
// alpha(0)=1, beta(0)=0, alpha(1)=0, beta(1)=1.
//   linear:              alpha = 1-t,        beta = t
//   variance preserving: alpha = cos(pi t/2), beta = sin(pi t/2)
struct Schedule {
  ScheduleKind kind = ScheduleKind::Linear;

  double alpha(double t) const;
  double beta(double t) const;
  double dalpha(double t) const;
  double dbeta(double t) const;

  static Schedule linear() { return {ScheduleKind::Linear}; }
  static Schedule vp() { return {ScheduleKind::VariancePreserving}; }
};

enum class InterpolantKind { DI, DDBI };

// Path construction between p0 and p1. DI is the noiseless two-point
// interpolant; DDBI adds bridge noise of scale
// sqrt(t(1-t) gamma^2 + (alpha^2 + beta^2) epsilon).
struct InterpolantSpec {
  Schedule schedule;
  InterpolantKind kind = InterpolantKind::DI;
  double gamma = 0.1;
  double epsilon = 1e-4;
  int dim = 1;

  // DI conditional std alpha(t) hits zero at t=1; clamp instead of dividing
  // by zero. DDBI keeps epsilon for the same purpose.
  double sigma_floor = 1e-4;
  // DDBI training restricts (l, t) to [delta, 1-delta]; the bridge velocity
  // diverges at the endpoints.
  double t_clip = 1e-3;

  double ddbi_std(double t) const;
  double ddbi_dstd(double t) const;
};

// Conditional law of x_t given the interpolant endpoints: isotropic Gaussian
// with mean mu(t) and scalar std sigma(t), plus their time derivatives.
struct ConditionalGaussian {
  std::vector<double> mean;
  std::vector<double> dmean_dt;
  double stddev = 1.0;
  double dstd_dt = 0.0;
};

// x_t = alpha x0 + beta x1 (+ sigma(t) z for DDBI). z is ignored for DI.
void sample_xt(const InterpolantSpec& spec, std::span<const double> x0,
               std::span<const double> x1, double t, std::span<const double> z,
               std::span<double> out);

// d x_t / dt with z held fixed. Exact time derivative of sample_xt; for DDBI
// this includes the epsilon part of sigma'(t), not just the bridge term.
// Throws std::domain_error for DDBI at t in {0, 1}.
void velocity(const InterpolantSpec& spec, std::span<const double> x0,
              std::span<const double> x1, double t, std::span<const double> z,
              std::span<double> out);

// DI conditions on x1 and requires p0 = N(0, I): law N(beta x1, alpha^2 I).
// DDBI conditions on (x0, x1): law N(alpha x0 + beta x1, sigma(t)^2 I).
ConditionalGaussian conditional_law(const InterpolantSpec& spec, std::span<const double> x0,
                                    std::span<const double> x1, double t);

// d/dt log N(x; mu(t), sigma(t)^2 I) =
//   -d sigma'/sigma + <x - mu, mu'>/sigma^2 + |x - mu|^2 sigma'/sigma^3
double conditional_time_score(const ConditionalGaussian& law, std::span<const double> x);

}  // namespace isadre
