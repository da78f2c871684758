#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "isadre/benchmarks.hpp"
#include "isadre/interpolant.hpp"
#include "isadre/net.hpp"
#include "isadre/rng.hpp"
#include "isadre/time_sampling.hpp"

namespace isadre {

enum class TrainMethod {
  Secant,   // CSA loss on u(x, l, t)
  Tangent,  // CTSM loss on s(x, t); quadrature baseline
};

struct TrainConfig {
  TrainMethod method = TrainMethod::Secant;
  std::int64_t steps = 2000;
  int batch_size = 512;
  AdamConfig opt;
  std::uint64_t seed = 0;
  InterpolantSpec interpolant;
  TimePairPolicy policy;  // grid resolved at train start when needed

  std::vector<int> hidden = {128, 128, 128};
  int time_freqs = 4;

  // "vi" attaches the importance grid as lambda(t) (and as the VI sampler's
  // table); "none" leaves the loss unweighted.
  std::string weighting = "vi";
  int grid_size = 32;
  int grid_mc = 2048;

  int loss_log_every = 50;
  double abort_dropped_frac = 0.10;
  int threads = 1;
};

struct LossRecord {
  std::int64_t step = 0;
  double loss = 0.0;
  double d_max = 1.0;
  int dropped = 0;
};

struct TrainState {
  SecantNet net;
  AdamState opt;
  std::int64_t step = 0;
  std::vector<LossRecord> history;
  rngutil::Engine rng;

  explicit TrainState(NetSpec spec) : net(std::move(spec)), opt(net.params()) {}
};

// One training tuple. xt and vel are filled by the loss evaluation.
struct TrainSample {
  std::vector<double> x0, x1, z, xt, vel;
  double l = 0.0;
  double t = 0.0;
  bool is_tangent = false;
};

struct BatchLoss {
  double loss = 0.0;
  std::vector<double> upstream;  // dLoss/du per sample; 0 for dropped samples
  std::vector<double> targets;
  std::vector<double> predictions;
  int dropped = 0;
};

// CSA loss over a batch: target is the conditional time score at (x_t, t),
// prediction is u(x_t, l, t) + (t - l) * du/dt with the correction detached;
// upstream carries d(mean lambda residual^2)/du, which bypasses the
// correction term entirely. lambda_table may be null (lambda = 1).
BatchLoss csa_loss_batch(const SecantNet& net, std::span<TrainSample> batch,
                         const InterpolantSpec& spec, const ImportanceGrid* lambda_table,
                         int threads = 1);

// CTSM loss for the tangent baseline net s(x, t).
BatchLoss ctsm_loss_batch(const SecantNet& net, std::span<TrainSample> batch,
                          const InterpolantSpec& spec, const ImportanceGrid* lambda_table,
                          int threads = 1);

class TrainAbortError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Resolves the policy against a problem: builds the importance grid when the
// sampler is VI or weighting is "vi", and clips (l, t) into
// [t_clip, 1 - t_clip] for DDBI.
TimePairPolicy resolve_policy(const TrainConfig& cfg, const BenchmarkProblem& problem,
                              rngutil::Engine& rng);

NetSpec net_spec_for(const TrainConfig& cfg, const BenchmarkProblem& problem);

TrainState make_initial_state(const TrainConfig& cfg, const BenchmarkProblem& problem);

// Advances the state by n_steps (clamped to cfg.steps total). The resolved
// policy must come from resolve_policy.
void train_steps(TrainState& state, const TrainConfig& cfg, const TimePairPolicy& policy,
                 const BenchmarkProblem& problem, std::int64_t n_steps);

// Full run: seeds, resolves the policy, trains cfg.steps steps.
TrainState train(const TrainConfig& cfg, const BenchmarkProblem& problem);

// Convenience wrapper: same loop with method = Tangent.
TrainState train_tangent_baseline(TrainConfig cfg, const BenchmarkProblem& problem);

// Draws one training tuple (pair + endpoint samples + bridge noise).
TrainSample draw_train_sample(const TrainConfig& cfg, const TimePairPolicy& policy,
                              const BenchmarkProblem& problem, rngutil::Engine& rng,
                              std::int64_t step);

}  // namespace isadre
