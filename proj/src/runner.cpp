#include "isadre/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "isadre/checkpoint.hpp"
#include "isadre/inference.hpp"
#include "isadre/stats.hpp"

namespace isadre {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const std::string& path, bool append = false) {
  std::ofstream os(path, append ? std::ios::app : std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os.precision(17);
  return os;
}

std::vector<std::vector<double>> eval_points(const ExperimentConfig& cfg,
                                             const BenchmarkProblem& problem) {
  std::vector<std::vector<double>> pts;
  if (cfg.eval.metric == "ratio_mse" && cfg.eval.grid && problem.dim == 1) {
    const GridSpec& g = *cfg.eval.grid;
    pts.reserve(g.n);
    for (int i = 0; i < g.n; ++i) {
      const double x = g.min + (g.max - g.min) * static_cast<double>(i) / (g.n - 1);
      pts.push_back({x});
    }
    return pts;
  }
  rngutil::Engine rng(cfg.eval.seed);
  pts.reserve(cfg.eval.n_samples);
  for (int i = 0; i < cfg.eval.n_samples; ++i) pts.push_back(problem.draw_p1(rng));
  return pts;
}

}  // namespace

TrainOutputs run_train(const ExperimentConfig& cfg) {
  const BenchmarkProblem problem = make_problem(cfg.problem);
  fs::create_directories(cfg.out_dir);

  TrainState state = train(cfg.train, problem);

  TrainOutputs out;
  out.checkpoint_path = (fs::path(cfg.out_dir) / "checkpoint.bin").string();
  out.metrics_path = (fs::path(cfg.out_dir) / "metrics.csv").string();
  out.config_path = (fs::path(cfg.out_dir) / "resolved_config.json").string();
  out.steps = state.step;
  out.final_loss = state.history.empty() ? 0.0 : state.history.back().loss;

  save_checkpoint(out.checkpoint_path, state);
  {
    auto os = open_out(out.metrics_path);
    os << "step,loss,d_max,dropped\n";
    for (const auto& rec : state.history)
      os << rec.step << "," << rec.loss << "," << rec.d_max << "," << rec.dropped << "\n";
  }
  {
    auto os = open_out(out.config_path);
    os << to_json(cfg).dump(2) << "\n";
  }
  return out;
}

std::vector<EvalRow> run_eval(const ExperimentConfig& cfg, const std::string& checkpoint_path) {
  const BenchmarkProblem problem = make_problem(cfg.problem);
  TrainState state = load_checkpoint(checkpoint_path);
  const NetSpec& spec = state.net.spec();
  if (spec.data_dim != problem.dim)
    throw ConfigError("checkpoint dimension " + std::to_string(spec.data_dim) +
                      " does not match problem dimension " + std::to_string(problem.dim));
  const bool secant = spec.time_inputs == 2;
  const std::string hash = config_hash(to_json(cfg));

  EvalRow proto;
  proto.method = secant ? "secant" : "tangent";
  proto.sampler = sampler_name(cfg.train.policy.sampler);
  proto.supervision = supervision_name(cfg.train.policy);
  proto.metric = cfg.eval.metric;
  proto.seed = cfg.seed;
  proto.config_hash = hash;

  const auto pts = eval_points(cfg, problem);

  auto log_ratio_at = [&](std::span<const double> x, int nfe) {
    if (secant) return log_ratio_secant(state.net, x, Partition::uniform(nfe));
    if (nfe < 2)
      throw ConfigError("eval.nfe: tangent quadrature needs at least 2 evaluations, got " +
                        std::to_string(nfe));
    return log_ratio_tangent_quadrature(state.net, x, nfe);
  };

  std::vector<EvalRow> rows;
  for (int nfe : cfg.eval.nfe) {
    EvalRow row = proto;
    row.nfe = nfe;
    std::vector<double> per_point(pts.size());
    if (cfg.eval.metric == "ratio_mse") {
      if (!problem.oracle_log_ratio)
        throw ConfigError("eval.metric ratio_mse requires a problem with an analytic log-ratio");
      std::vector<double> sq(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double est = log_ratio_at(pts[i], nfe);
        const double r = est - problem.oracle_log_ratio(pts[i]);
        sq[i] = r * r;
      }
      row.value = stats::mean(sq);
      row.stderr_ = sq.size() > 1 ? stats::stderr_of_mean(sq) : 0.0;
    } else if (cfg.eval.metric == "mi") {
      for (std::size_t i = 0; i < pts.size(); ++i) per_point[i] = log_ratio_at(pts[i], nfe);
      row.value = stats::mean(per_point);
      row.stderr_ = per_point.size() > 1 ? stats::stderr_of_mean(per_point) : 0.0;
    } else {  // nll
      for (std::size_t i = 0; i < pts.size(); ++i)
        per_point[i] = -(log_ratio_at(pts[i], nfe) + stats::std_normal_log_pdf(pts[i]));
      row.value = stats::mean(per_point);
      row.stderr_ = per_point.size() > 1 ? stats::stderr_of_mean(per_point) : 0.0;
    }
    rows.push_back(row);
  }

  fs::create_directories(cfg.out_dir);
  if (cfg.eval.grid_dump && problem.dim == 2) {
    const GridSpec& g = *cfg.eval.grid_dump;
    const int nfe = cfg.eval.nfe.front();
    auto os = open_out((fs::path(cfg.out_dir) / "grid_density.csv").string());
    os << "x,y,log_density\n";
    for (int i = 0; i < g.n; ++i) {
      for (int j = 0; j < g.n; ++j) {
        const double x = g.min + (g.max - g.min) * static_cast<double>(i) / (g.n - 1);
        const double y = g.min + (g.max - g.min) * static_cast<double>(j) / (g.n - 1);
        const std::vector<double> pt = {x, y};
        const double ld = log_ratio_at(pt, nfe) + stats::std_normal_log_pdf(pt);
        os << x << "," << y << "," << ld << "\n";
      }
    }
  }

  const std::string report = (fs::path(cfg.out_dir) / "report.csv").string();
  write_report_csv(report, rows, fs::exists(report));
  return rows;
}

void write_report_csv(const std::string& path, const std::vector<EvalRow>& rows, bool append) {
  auto os = open_out(path, append);
  if (!append) os << "method,sampler,supervision,nfe,metric,value,stderr,seed,config_hash\n";
  for (const auto& r : rows)
    os << r.method << "," << r.sampler << "," << r.supervision << "," << r.nfe << "," << r.metric
       << "," << r.value << "," << r.stderr_ << "," << r.seed << "," << r.config_hash << "\n";
}

}  // namespace isadre
