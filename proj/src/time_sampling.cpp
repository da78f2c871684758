#include "isadre/time_sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isadre/stats.hpp"

namespace isadre {

std::size_t ImportanceGrid::cell_of(double t) const {
  const double g = static_cast<double>(knots.size());
  const auto cell = static_cast<std::ptrdiff_t>(std::floor(t * g));
  return static_cast<std::size_t>(
      std::clamp<std::ptrdiff_t>(cell, 0, static_cast<std::ptrdiff_t>(knots.size()) - 1));
}

double ImportanceGrid::lambda_at(double t) const { return lambda[cell_of(t)]; }

double ImportanceGrid::sample(rngutil::Engine& rng) const {
  const double u = rngutil::uniform01(rng);
  const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
  const std::size_t cell =
      std::min(static_cast<std::size_t>(it - cdf.begin()), knots.size() - 1);
  const double lo = cell == 0 ? 0.0 : cdf[cell - 1];
  const double hi = cdf[cell];
  const double frac = hi > lo ? (u - lo) / (hi - lo) : 0.5;
  const double g = static_cast<double>(knots.size());
  return (static_cast<double>(cell) + frac) / g;
}

ImportanceGrid build_importance_grid(
    const std::function<double(double, rngutil::Engine&)>& scorer, int grid_size, int mc_draws,
    rngutil::Engine& rng) {
  if (grid_size < 2) throw std::invalid_argument("build_importance_grid: need at least 2 cells");
  if (mc_draws < 100) throw std::invalid_argument("build_importance_grid: need at least 100 draws");

  ImportanceGrid grid;
  const double g = static_cast<double>(grid_size);
  grid.knots.resize(grid_size);
  grid.variances.resize(grid_size);
  std::vector<double> weights(grid_size);
  std::vector<double> draws(mc_draws);
  for (int i = 0; i < grid_size; ++i) {
    const double t = (static_cast<double>(i) + 0.5) / g;
    grid.knots[i] = t;
    for (int k = 0; k < mc_draws; ++k) draws[k] = scorer(t, rng);
    grid.variances[i] = stats::variance(draws);
    weights[i] = 1.0 / (grid.variances[i] + kVarianceFloor);
  }

  double total = 0.0;
  for (double w : weights) total += w;
  grid.prob.resize(grid_size);
  grid.cdf.resize(grid_size);
  grid.lambda.resize(grid_size);
  double run = 0.0;
  const double mean_w = total / g;
  for (int i = 0; i < grid_size; ++i) {
    grid.prob[i] = weights[i] / total;
    run += grid.prob[i];
    grid.cdf[i] = run;
    grid.lambda[i] = weights[i] / mean_w;
  }
  grid.cdf.back() = 1.0;
  return grid;
}

ImportanceGrid build_importance_grid(const InterpolantSpec& spec, const BenchmarkProblem& problem,
                                     int grid_size, int mc_draws, rngutil::Engine& rng) {
  std::vector<double> x0(problem.dim), x1(problem.dim), z(problem.dim), xt(problem.dim);
  auto scorer = [&](double t, rngutil::Engine& eng) {
    problem.sample_p0(eng, x0);
    problem.sample_p1(eng, x1);
    rngutil::fill_normal(eng, z.data(), z.size());
    sample_xt(spec, x0, x1, t, z, xt);
    return conditional_time_score(conditional_law(spec, x0, x1, t), xt);
  };
  return build_importance_grid(scorer, grid_size, mc_draws, rng);
}

double d_max_schedule(std::int64_t step, std::int64_t total_steps, double d0,
                      double anneal_fraction) {
  if (d0 <= 0.0 || d0 > 1.0) throw std::invalid_argument("d_max_schedule: d0 must be in (0, 1]");
  if (anneal_fraction <= 0.0 || anneal_fraction > 1.0)
    throw std::invalid_argument("d_max_schedule: anneal_fraction must be in (0, 1]");
  const double horizon = anneal_fraction * static_cast<double>(total_steps);
  const double frac =
      horizon > 0.0 ? std::min(1.0, static_cast<double>(step) / horizon) : 1.0;
  return d0 + (1.0 - d0) * frac;
}

double TimePairPolicy::d_max(std::int64_t step, std::int64_t total_steps) const {
  if (supervision != SupervisionKind::CIA) return 1.0;
  return d_max_schedule(step, total_steps, d0, anneal_fraction);
}

double TimePairPolicy::draw_time(rngutil::Engine& rng) const {
  switch (sampler) {
    case TimeSamplerKind::Uniform:
      return rngutil::uniform01(rng);
    case TimeSamplerKind::LogitNormal: {
      const double z = ln_mean + ln_std * rngutil::normal(rng);
      return 1.0 / (1.0 + std::exp(-z));
    }
    case TimeSamplerKind::VarianceImportance:
      if (!grid) throw std::logic_error("TimePairPolicy: VI sampler requires a grid");
      return grid->sample(rng);
  }
  return 0.0;
}

TimePair TimePairPolicy::sample_pair(rngutil::Engine& rng, std::int64_t step,
                                     std::int64_t total_steps) const {
  double a = std::clamp(draw_time(rng), t_lo, t_hi);
  double b = std::clamp(draw_time(rng), t_lo, t_hi);
  TimePair pair;
  pair.l = std::min(a, b);
  pair.t = std::max(a, b);
  if (supervision == SupervisionKind::FixedTangentRatio) {
    if (rngutil::uniform01(rng) < rho_sts) pair.l = pair.t;
  } else {
    const double cap = d_max(step, total_steps);
    if (pair.t - pair.l > cap) pair.l = pair.t - cap;  // keeps the t marginal
  }
  pair.is_tangent = pair.l == pair.t;
  return pair;
}

double TimePairPolicy::loss_weight(double t) const { return grid ? grid->lambda_at(t) : 1.0; }

double eta_marginal_check(const TimePairPolicy& policy, rngutil::Engine& rng, int n) {
  if (n <= 0) throw std::invalid_argument("eta_marginal_check: need n > 0");
  std::vector<double> eta(n), direct(n);
  for (int i = 0; i < n; ++i) {
    const double a = policy.draw_time(rng);
    const double b = policy.draw_time(rng);
    const double l = std::min(a, b);
    const double t = std::max(a, b);
    eta[i] = l + (t - l) * rngutil::uniform01(rng);
    direct[i] = policy.draw_time(rng);
  }
  return stats::ks_two_sample(std::move(eta), std::move(direct));
}

}  // namespace isadre
