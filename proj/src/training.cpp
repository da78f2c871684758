#include "isadre/training.hpp"

#include <algorithm>
#include <cmath>

#include "isadre/parallel.hpp"

namespace isadre {

namespace {
constexpr std::size_t kChunk = 64;

BatchLoss loss_batch_impl(const SecantNet& net, std::span<TrainSample> batch,
                          const InterpolantSpec& spec, const ImportanceGrid* lambda_table,
                          bool secant, int threads) {
  const std::size_t n = batch.size();
  BatchLoss out;
  out.upstream.assign(n, 0.0);
  out.targets.assign(n, 0.0);
  out.predictions.assign(n, 0.0);
  std::vector<double> weights(n, 1.0);
  std::vector<char> kept(n, 0);
  std::vector<double> u_values(n, 0.0);

  parallel_chunks(n, kChunk, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    SecantNet::Trace tr = net.make_trace();
    for (std::size_t i = begin; i < end; ++i) {
      TrainSample& s = batch[i];
      s.xt.resize(s.x0.size());
      sample_xt(spec, s.x0, s.x1, s.t, s.z, s.xt);
      const double target = conditional_time_score(conditional_law(spec, s.x0, s.x1, s.t), s.xt);
      out.targets[i] = target;
      if (!std::isfinite(target)) continue;
      kept[i] = 1;
      if (lambda_table) weights[i] = lambda_table->lambda_at(s.t);
      if (secant) {
        const double times[2] = {s.l, s.t};
        if (s.is_tangent) {
          u_values[i] = net.forward(s.xt, std::span<const double>(times, 2), tr);
          out.predictions[i] = u_values[i];
        } else {
          s.vel.resize(s.x0.size());
          velocity(spec, s.x0, s.x1, s.t, s.z, s.vel);
          const double tdir[2] = {0.0, 1.0};
          const auto [u, du] = net.forward_jvp(s.xt, std::span<const double>(times, 2), s.vel,
                                               std::span<const double>(tdir, 2), tr);
          u_values[i] = u;
          // Correction term is detached: it shifts the prediction value but
          // never carries gradient.
          out.predictions[i] = u + (s.t - s.l) * du;
        }
      } else {
        const double times[1] = {s.t};
        u_values[i] = net.forward(s.xt, std::span<const double>(times, 1), tr);
        out.predictions[i] = u_values[i];
      }
    }
  });

  std::size_t n_kept = 0;
  for (std::size_t i = 0; i < n; ++i) n_kept += kept[i];
  out.dropped = static_cast<int>(n - n_kept);
  if (n_kept == 0) {
    out.loss = 0.0;
    return out;
  }
  double acc = 0.0;
  const double inv = 1.0 / static_cast<double>(n_kept);
  for (std::size_t i = 0; i < n; ++i) {
    if (!kept[i]) continue;
    const double r = out.targets[i] - out.predictions[i];
    acc += weights[i] * r * r;
    out.upstream[i] = -2.0 * weights[i] * r * inv;
  }
  out.loss = acc * inv;
  return out;
}
}  // namespace

BatchLoss csa_loss_batch(const SecantNet& net, std::span<TrainSample> batch,
                         const InterpolantSpec& spec, const ImportanceGrid* lambda_table,
                         int threads) {
  return loss_batch_impl(net, batch, spec, lambda_table, true, threads);
}

BatchLoss ctsm_loss_batch(const SecantNet& net, std::span<TrainSample> batch,
                          const InterpolantSpec& spec, const ImportanceGrid* lambda_table,
                          int threads) {
  return loss_batch_impl(net, batch, spec, lambda_table, false, threads);
}

TimePairPolicy resolve_policy(const TrainConfig& cfg, const BenchmarkProblem& problem,
                              rngutil::Engine& rng) {
  TimePairPolicy policy = cfg.policy;
  if (cfg.interpolant.kind == InterpolantKind::DDBI) {
    policy.t_lo = cfg.interpolant.t_clip;
    policy.t_hi = 1.0 - cfg.interpolant.t_clip;
  }
  const bool needs_grid =
      policy.sampler == TimeSamplerKind::VarianceImportance || cfg.weighting == "vi";
  if (needs_grid && !policy.grid) {
    policy.grid = std::make_shared<ImportanceGrid>(
        build_importance_grid(cfg.interpolant, problem, cfg.grid_size, cfg.grid_mc, rng));
  }
  return policy;
}

NetSpec net_spec_for(const TrainConfig& cfg, const BenchmarkProblem& problem) {
  NetSpec spec;
  spec.data_dim = problem.dim;
  spec.time_inputs = cfg.method == TrainMethod::Secant ? 2 : 1;
  spec.hidden = cfg.hidden;
  spec.time_freqs = cfg.time_freqs;
  return spec;
}

TrainState make_initial_state(const TrainConfig& cfg, const BenchmarkProblem& problem) {
  TrainState state(net_spec_for(cfg, problem));
  state.rng.seed(cfg.seed);
  state.net.init_params(state.rng);
  return state;
}

TrainSample draw_train_sample(const TrainConfig& cfg, const TimePairPolicy& policy,
                              const BenchmarkProblem& problem, rngutil::Engine& rng,
                              std::int64_t step) {
  TrainSample s;
  const TimePair pair = policy.sample_pair(rng, step, cfg.steps);
  s.l = pair.l;
  s.t = pair.t;
  s.is_tangent = pair.is_tangent;
  s.x0.resize(problem.dim);
  s.x1.resize(problem.dim);
  s.z.assign(problem.dim, 0.0);
  problem.sample_p0(rng, s.x0);
  problem.sample_p1(rng, s.x1);
  if (cfg.interpolant.kind == InterpolantKind::DDBI)
    rngutil::fill_normal(rng, s.z.data(), s.z.size());
  return s;
}

void train_steps(TrainState& state, const TrainConfig& cfg, const TimePairPolicy& policy,
                 const BenchmarkProblem& problem, std::int64_t n_steps) {
  const bool secant = cfg.method == TrainMethod::Secant;
  const std::int64_t last = std::min(cfg.steps, state.step + n_steps);
  std::vector<TrainSample> batch(cfg.batch_size);
  std::vector<std::vector<double>> x_batch(cfg.batch_size);
  std::vector<std::vector<double>> times_batch(cfg.batch_size);

  while (state.step < last) {
    for (int i = 0; i < cfg.batch_size; ++i)
      batch[i] = draw_train_sample(cfg, policy, problem, state.rng, state.step);

    BatchLoss result = secant ? csa_loss_batch(state.net, batch, cfg.interpolant,
                                               policy.grid.get(), cfg.threads)
                              : ctsm_loss_batch(state.net, batch, cfg.interpolant,
                                                policy.grid.get(), cfg.threads);
    if (result.dropped > cfg.abort_dropped_frac * cfg.batch_size)
      throw TrainAbortError("training aborted at step " + std::to_string(state.step) + ": " +
                            std::to_string(result.dropped) + "/" +
                            std::to_string(cfg.batch_size) +
                            " samples had non-finite targets (interpolant misconfigured?)");

    for (int i = 0; i < cfg.batch_size; ++i) {
      x_batch[i] = batch[i].xt;
      if (secant)
        times_batch[i] = {batch[i].l, batch[i].t};
      else
        times_batch[i] = {batch[i].t};
    }
    ParamVector grads =
        grad_params(state.net, x_batch, times_batch, result.upstream, cfg.threads);
    state.opt.apply(cfg.opt, grads, state.net.params());

    if (state.step % cfg.loss_log_every == 0 || state.step + 1 == last) {
      state.history.push_back(
          {state.step, result.loss, policy.d_max(state.step, cfg.steps), result.dropped});
    }
    ++state.step;
  }
}

TrainState train(const TrainConfig& cfg, const BenchmarkProblem& problem) {
  TrainState state = make_initial_state(cfg, problem);
  const TimePairPolicy policy = resolve_policy(cfg, problem, state.rng);
  train_steps(state, cfg, policy, problem, cfg.steps);
  return state;
}

TrainState train_tangent_baseline(TrainConfig cfg, const BenchmarkProblem& problem) {
  cfg.method = TrainMethod::Tangent;
  return train(cfg, problem);
}

}  // namespace isadre
