#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "isadre/benchmarks.hpp"
#include "isadre/interpolant.hpp"
#include "isadre/rng.hpp"

namespace isadre {

// Piecewise-constant importance table over G equal cells of [0,1]. knots[i]
// is the center of cell i; the variance of the conditional time score is
// estimated there. Sampling probability per cell is proportional to
// 1/(var + eps_var); lambda is the same weight rescaled to mean one so the
// loss keeps its natural scale.
struct ImportanceGrid {
  std::vector<double> knots;
  std::vector<double> variances;
  std::vector<double> prob;    // per-cell sampling probability, sums to 1
  std::vector<double> cdf;     // cumulative prob, strictly increasing to 1
  std::vector<double> lambda;  // mean-one loss weights per cell

  std::size_t cell_of(double t) const;
  double lambda_at(double t) const;
  double sample(rngutil::Engine& rng) const;  // inverse CDF, uniform within cell
};

inline constexpr double kVarianceFloor = 1e-6;  // eps_var

// Builds the grid from a scorer(t, rng) that draws one conditional time score
// at time t. G cells, N Monte Carlo draws per cell.
ImportanceGrid build_importance_grid(
    const std::function<double(double, rngutil::Engine&)>& scorer, int grid_size, int mc_draws,
    rngutil::Engine& rng);

// Production scorer: draws (x0, x1, z), builds x_t, evaluates the conditional
// time score of the interpolant's law.
ImportanceGrid build_importance_grid(const InterpolantSpec& spec, const BenchmarkProblem& problem,
                                     int grid_size, int mc_draws, rngutil::Engine& rng);

enum class TimeSamplerKind { Uniform, LogitNormal, VarianceImportance };
enum class SupervisionKind { FixedTangentRatio, CIA };

// Linear ramp from d0 at step 0 to 1 at anneal_fraction * total_steps.
double d_max_schedule(std::int64_t step, std::int64_t total_steps, double d0,
                      double anneal_fraction);

struct TimePair {
  double l = 0.0;
  double t = 0.0;
  bool is_tangent = false;
};

// Draws ordered interval pairs (l <= t) and applies the supervision policy.
struct TimePairPolicy {
  TimeSamplerKind sampler = TimeSamplerKind::Uniform;
  double ln_mean = -0.4;
  double ln_std = 1.0;
  std::shared_ptr<const ImportanceGrid> grid;  // required for VarianceImportance

  SupervisionKind supervision = SupervisionKind::CIA;
  double rho_sts = 0.5;  // FixedTangentRatio: probability of forcing l = t
  double d0 = 0.01;
  double anneal_fraction = 0.5;

  // Training-time clip of both coordinates (DDBI endpoint singularity).
  double t_lo = 0.0;
  double t_hi = 1.0;

  double d_max(std::int64_t step, std::int64_t total_steps) const;
  double draw_time(rngutil::Engine& rng) const;  // one unclipped coordinate
  TimePair sample_pair(rngutil::Engine& rng, std::int64_t step, std::int64_t total_steps) const;

  // Loss weight; 1 when no grid is attached. Indexed by the pair's t.
  double loss_weight(double t) const;
};

// Lemma-1 style check: draws (l, t) pairs from the policy's raw sampler,
// then eta ~ U[l, t]; returns the KS distance between eta's empirical law and
// direct single-coordinate draws. Throws on n <= 0.
double eta_marginal_check(const TimePairPolicy& policy, rngutil::Engine& rng, int n);

}  // namespace isadre
