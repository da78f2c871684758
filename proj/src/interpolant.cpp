#include "isadre/interpolant.hpp"

#include <cmath>
#include <stdexcept>

namespace isadre {

namespace {
constexpr double kHalfPi = 1.570796326794896619231322;
}

double Schedule::alpha(double t) const {
  return kind == ScheduleKind::Linear ? 1.0 - t : std::cos(kHalfPi * t);
}

double Schedule::beta(double t) const {
  return kind == ScheduleKind::Linear ? t : std::sin(kHalfPi * t);
}

double Schedule::dalpha(double t) const {
  return kind == ScheduleKind::Linear ? -1.0 : -kHalfPi * std::sin(kHalfPi * t);
}

double Schedule::dbeta(double t) const {
  return kind == ScheduleKind::Linear ? 1.0 : kHalfPi * std::cos(kHalfPi * t);
}

double InterpolantSpec::ddbi_std(double t) const {
  const double a = schedule.alpha(t);
  const double b = schedule.beta(t);
  return std::sqrt(t * (1.0 - t) * gamma * gamma + (a * a + b * b) * epsilon);
}

double InterpolantSpec::ddbi_dstd(double t) const {
  const double a = schedule.alpha(t);
  const double b = schedule.beta(t);
  const double da = schedule.dalpha(t);
  const double db = schedule.dbeta(t);
  const double dvar = (1.0 - 2.0 * t) * gamma * gamma + 2.0 * (a * da + b * db) * epsilon;
  return dvar / (2.0 * ddbi_std(t));
}

void sample_xt(const InterpolantSpec& spec, std::span<const double> x0,
               std::span<const double> x1, double t, std::span<const double> z,
               std::span<double> out) {
  const double a = spec.schedule.alpha(t);
  const double b = spec.schedule.beta(t);
  if (spec.kind == InterpolantKind::DI) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x0[i] + b * x1[i];
    return;
  }
  const double s = spec.ddbi_std(t);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x0[i] + b * x1[i] + s * z[i];
}

void velocity(const InterpolantSpec& spec, std::span<const double> x0,
              std::span<const double> x1, double t, std::span<const double> z,
              std::span<double> out) {
  const double da = spec.schedule.dalpha(t);
  const double db = spec.schedule.dbeta(t);
  if (spec.kind == InterpolantKind::DI) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = da * x0[i] + db * x1[i];
    return;
  }
  if (t <= 0.0 || t >= 1.0)
    throw std::domain_error("velocity: DDBI bridge term diverges at t in {0, 1}");
  const double ds = spec.ddbi_dstd(t);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = da * x0[i] + db * x1[i] + ds * z[i];
}

ConditionalGaussian conditional_law(const InterpolantSpec& spec, std::span<const double> x0,
                                    std::span<const double> x1, double t) {
  ConditionalGaussian law;
  const std::size_t d = x1.size();
  law.mean.resize(d);
  law.dmean_dt.resize(d);
  const double a = spec.schedule.alpha(t);
  const double b = spec.schedule.beta(t);
  const double da = spec.schedule.dalpha(t);
  const double db = spec.schedule.dbeta(t);
  if (spec.kind == InterpolantKind::DI) {
    // p0 = N(0, I): x_t | x1 ~ N(beta x1, alpha^2 I).
    for (std::size_t i = 0; i < d; ++i) {
      law.mean[i] = b * x1[i];
      law.dmean_dt[i] = db * x1[i];
    }
    law.stddev = std::max(a, spec.sigma_floor);
    law.dstd_dt = da;
  } else {
    for (std::size_t i = 0; i < d; ++i) {
      law.mean[i] = a * x0[i] + b * x1[i];
      law.dmean_dt[i] = da * x0[i] + db * x1[i];
    }
    law.stddev = std::max(spec.ddbi_std(t), spec.sigma_floor);
    law.dstd_dt = spec.ddbi_dstd(t);
  }
  return law;
}

double conditional_time_score(const ConditionalGaussian& law, std::span<const double> x) {
  if (x.size() != law.mean.size())
    throw std::invalid_argument("conditional_time_score: dimension mismatch");
  const double s = law.stddev;
  const double ds = law.dstd_dt;
  const double inv2 = 1.0 / (s * s);
  double dot = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = x[i] - law.mean[i];
    dot += r * law.dmean_dt[i];
    sq += r * r;
  }
  const double d = static_cast<double>(x.size());
  return -d * ds / s + dot * inv2 + sq * ds * inv2 / s;
}

}  // namespace isadre
