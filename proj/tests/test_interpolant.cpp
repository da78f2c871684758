#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "isadre/interpolant.hpp"
#include "isadre/rng.hpp"
#include "isadre/stats.hpp"
#include "support.hpp"

using namespace isadre;

namespace {
InterpolantSpec di_linear() {
  InterpolantSpec s;
  s.kind = InterpolantKind::DI;
  s.schedule = Schedule::linear();
  return s;
}

InterpolantSpec ddbi(double gamma, double eps, ScheduleKind sched = ScheduleKind::Linear) {
  InterpolantSpec s;
  s.kind = InterpolantKind::DDBI;
  s.schedule.kind = sched;
  s.gamma = gamma;
  s.epsilon = eps;
  return s;
}
}  // namespace

TEST_CASE("schedule endpoint constraints") {
  for (Schedule s : {Schedule::linear(), Schedule::vp()}) {
    CHECK(s.alpha(0.0) == doctest::Approx(1.0));
    CHECK(s.beta(0.0) == doctest::Approx(0.0));
    CHECK(s.alpha(1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.beta(1.0) == doctest::Approx(1.0));
  }
  const Schedule vp = Schedule::vp();
  for (double t = 0.0; t <= 1.0; t += 0.01) {
    const double a = vp.alpha(t);
    const double b = vp.beta(t);
    CHECK(std::abs(a * a + b * b - 1.0) < 1e-12);
  }
}

TEST_CASE("sample_xt: DI midpoint and endpoints") {
  const InterpolantSpec spec = di_linear();
  const std::vector<double> x0 = {0.0, 0.0};
  const std::vector<double> x1 = {2.0, 2.0};
  const std::vector<double> z = {0.0, 0.0};
  std::vector<double> out(2);
  sample_xt(spec, x0, x1, 0.5, z, out);
  CHECK(out[0] == doctest::Approx(1.0));
  CHECK(out[1] == doctest::Approx(1.0));
  sample_xt(spec, x0, x1, 0.0, z, out);
  CHECK(out[0] == doctest::Approx(x0[0]));

  InterpolantSpec vp = spec;
  vp.schedule = Schedule::vp();
  const std::vector<double> x0b = {1.5, -0.5};
  sample_xt(vp, x0b, x1, 0.0, z, out);
  CHECK(out[0] == doctest::Approx(1.5));
  CHECK(out[1] == doctest::Approx(-0.5));
}

TEST_CASE("sample_xt: DDBI bridge noise scale") {
  const InterpolantSpec spec = ddbi(1.0, 0.0);
  const std::vector<double> x0 = {0.0, 0.0};
  const std::vector<double> x1 = {0.0, 0.0};
  const std::vector<double> z = {1.0, 0.0};
  std::vector<double> out(2);
  sample_xt(spec, x0, x1, 0.5, z, out);
  CHECK(out[0] == doctest::Approx(0.5));  // sigma = sqrt(0.25) = 0.5
  CHECK(out[1] == doctest::Approx(0.0));
}

TEST_CASE("velocity: DI linear is constant") {
  const InterpolantSpec spec = di_linear();
  const std::vector<double> x0 = {0.0};
  const std::vector<double> x1 = {2.0};
  const std::vector<double> z = {0.0};
  std::vector<double> out(1);
  for (double t : {0.0, 0.3, 1.0}) {
    velocity(spec, x0, x1, t, z, out);
    CHECK(out[0] == doctest::Approx(2.0));
  }
}

TEST_CASE("velocity: DDBI noise term vanishes at t = 0.5") {
  const InterpolantSpec spec = ddbi(1.0, 1e-4);
  const std::vector<double> x0 = {0.7};
  const std::vector<double> x1 = {-0.2};
  const std::vector<double> z = {3.0};
  std::vector<double> vel(1), di_vel(1);
  velocity(spec, x0, x1, 0.5, z, vel);
  InterpolantSpec plain = spec;
  plain.kind = InterpolantKind::DI;
  velocity(plain, x0, x1, 0.5, z, di_vel);
  CHECK(vel[0] == doctest::Approx(di_vel[0]).epsilon(1e-12));
}

TEST_CASE("velocity: DDBI bridge coefficient at t = 0.25") {
  const InterpolantSpec spec = ddbi(1.0, 0.0);
  const std::vector<double> x0 = {0.0};
  const std::vector<double> x1 = {0.0};
  const std::vector<double> z = {1.0};
  std::vector<double> out(1);
  velocity(spec, x0, x1, 0.25, z, out);
  // (1 - 2t) / (2 sqrt(t (1-t))) = 0.5 / (2 sqrt(0.1875))
  CHECK(out[0] == doctest::Approx(0.57735).epsilon(1e-4));
}

TEST_CASE("velocity: DDBI endpoints are a domain error") {
  const InterpolantSpec spec = ddbi(0.5, 1e-4);
  const std::vector<double> x0 = {0.0};
  const std::vector<double> x1 = {1.0};
  const std::vector<double> z = {0.3};
  std::vector<double> out(1);
  CHECK_THROWS_AS(velocity(spec, x0, x1, 0.0, z, out), std::domain_error);
  CHECK_THROWS_AS(velocity(spec, x0, x1, 1.0, z, out), std::domain_error);
}

TEST_CASE("conditional_law: DI linear") {
  const InterpolantSpec spec = di_linear();
  const std::vector<double> x0 = {0.3};
  const std::vector<double> x1 = {2.0};
  const ConditionalGaussian law = conditional_law(spec, x0, x1, 0.5);
  CHECK(law.mean[0] == doctest::Approx(1.0));
  CHECK(law.stddev == doctest::Approx(0.5));
  CHECK(law.dmean_dt[0] == doctest::Approx(2.0));
  CHECK(law.dstd_dt == doctest::Approx(-1.0));
}

TEST_CASE("conditional_law: DDBI symmetry point") {
  const InterpolantSpec spec = ddbi(1.0, 0.0);
  const std::vector<double> x0 = {0.0};
  const std::vector<double> x1 = {1.0};
  const ConditionalGaussian law = conditional_law(spec, x0, x1, 0.5);
  CHECK(law.stddev == doctest::Approx(0.5));
  CHECK(law.dstd_dt == doctest::Approx(0.0));
}

TEST_CASE("conditional_law: DI VP at the alpha = beta point") {
  InterpolantSpec spec = di_linear();
  spec.schedule = Schedule::vp();
  const std::vector<double> x0 = {0.0};
  const std::vector<double> x1 = {1.0};
  // cos(pi t / 2) = sin(pi t / 2) at t = 0.5
  const ConditionalGaussian law = conditional_law(spec, x0, x1, 0.5);
  CHECK(law.stddev == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("conditional_law: DI std is clamped at the endpoint") {
  const InterpolantSpec spec = di_linear();
  const std::vector<double> x0 = {0.0};
  const std::vector<double> x1 = {1.0};
  const ConditionalGaussian law = conditional_law(spec, x0, x1, 1.0);
  CHECK(law.stddev == doctest::Approx(spec.sigma_floor));
}

TEST_CASE("conditional_time_score: static law and centered point") {
  ConditionalGaussian law;
  law.mean = {0.4};
  law.dmean_dt = {0.0};
  law.stddev = 0.7;
  law.dstd_dt = 0.0;
  const std::vector<double> x = {2.0};
  CHECK(conditional_time_score(law, x) == doctest::Approx(0.0));

  law.dstd_dt = -0.3;
  const std::vector<double> at_mean = {0.4};
  // quadratic terms vanish at x = mu: score = -sigma'/sigma
  CHECK(conditional_time_score(law, at_mean) == doctest::Approx(0.3 / 0.7));
}

TEST_CASE("conditional_time_score matches finite differences of the log density") {
  // Independent oracle: an explicit Gaussian path mu(t) = mu0 + mu1 t,
  // sigma(t) = s0 exp(s1 t); the score formula must equal d/dt of its log pdf.
  rngutil::Engine rng(2024);
  double worst = 0.0;
  for (int c = 0; c < 1000; ++c) {
    const int d = 1 + static_cast<int>(rngutil::uniform01(rng) * 4.0);
    std::vector<double> mu0(d), mu1(d), x(d);
    for (int i = 0; i < d; ++i) {
      mu0[i] = rngutil::normal(rng);
      mu1[i] = rngutil::normal(rng);
    }
    const double s0 = rngutil::uniform(rng, 0.3, 2.0);
    const double s1 = rngutil::uniform(rng, -1.0, 1.0);
    const double t = rngutil::uniform(rng, 0.1, 0.9);

    auto log_pdf = [&](double tt) {
      const double sig = s0 * std::exp(s1 * tt);
      double sq = 0.0;
      for (int i = 0; i < d; ++i) {
        const double r = x[i] - (mu0[i] + mu1[i] * tt);
        sq += r * r;
      }
      return -0.5 * d * std::log(2.0 * M_PI) - d * std::log(sig) - 0.5 * sq / (sig * sig);
    };

    ConditionalGaussian law;
    law.mean.resize(d);
    law.dmean_dt = mu1;
    const double sig = s0 * std::exp(s1 * t);
    law.stddev = sig;
    law.dstd_dt = s1 * sig;
    for (int i = 0; i < d; ++i) {
      law.mean[i] = mu0[i] + mu1[i] * t;
      x[i] = law.mean[i] + 2.0 * sig * rngutil::normal(rng);
    }
    const double h = 1e-5;
    const double fd = (log_pdf(t + h) - log_pdf(t - h)) / (2.0 * h);
    worst = std::max(worst, std::abs(conditional_time_score(law, x) - fd));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("velocity equals the path derivative with z held fixed") {
  rngutil::Engine rng(99);
  double worst = 0.0;
  for (int c = 0; c < 500; ++c) {
    InterpolantSpec spec;
    spec.kind = rngutil::uniform01(rng) < 0.5 ? InterpolantKind::DI : InterpolantKind::DDBI;
    spec.schedule.kind =
        rngutil::uniform01(rng) < 0.5 ? ScheduleKind::Linear : ScheduleKind::VariancePreserving;
    spec.gamma = rngutil::uniform(rng, 0.05, 1.0);
    spec.epsilon = rngutil::uniform01(rng) < 0.5 ? 0.0 : 1e-3;
    const int d = 1 + static_cast<int>(rngutil::uniform01(rng) * 3.0);
    std::vector<double> x0(d), x1(d), z(d), vel(d), plus(d), minus(d);
    for (int i = 0; i < d; ++i) {
      x0[i] = rngutil::normal(rng);
      x1[i] = rngutil::normal(rng);
      z[i] = rngutil::normal(rng);
    }
    const double t = rngutil::uniform(rng, 0.1, 0.9);
    velocity(spec, x0, x1, t, z, vel);
    const double h = 1e-5;
    sample_xt(spec, x0, x1, t + h, z, plus);
    sample_xt(spec, x0, x1, t - h, z, minus);
    for (int i = 0; i < d; ++i)
      worst = std::max(worst, std::abs(vel[i] - (plus[i] - minus[i]) / (2.0 * h)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("endpoint marginals of the DI path") {
  // DI linear between N(0,1) and N(1,1): samples at t=0 must look like p0,
  // at t=1 like p1 (two-sample KS on 1e4 draws, alpha = 0.01).
  rngutil::Engine rng(7);
  const InterpolantSpec spec = di_linear();
  const int n = 10000;
  std::vector<double> at0(n), at1(n), p0(n), p1(n);
  std::vector<double> x0(1), x1(1), out(1);
  const std::vector<double> z = {0.0};
  for (int i = 0; i < n; ++i) {
    x0[0] = rngutil::normal(rng);
    x1[0] = 1.0 + rngutil::normal(rng);
    sample_xt(spec, x0, x1, 0.0, z, out);
    at0[i] = out[0];
    sample_xt(spec, x0, x1, 1.0, z, out);
    at1[i] = out[0];
    p0[i] = rngutil::normal(rng);
    p1[i] = 1.0 + rngutil::normal(rng);
  }
  const double crit = stats::ks_two_sample_critical(n, n, 1.628);
  CHECK(stats::ks_two_sample(at0, p0) < crit);
  CHECK(stats::ks_two_sample(at1, p1) < crit);
}
