#include "isadre/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace isadre {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& prefix, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError("config section '" + prefix + "' must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key))
      throw ConfigError("unknown config key: " + (prefix.empty() ? key : prefix + "." + key));
  }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

ScheduleKind parse_schedule(const std::string& s) {
  if (s == "linear") return ScheduleKind::Linear;
  if (s == "vp") return ScheduleKind::VariancePreserving;
  throw ConfigError("interpolant.schedule must be 'linear' or 'vp', got '" + s + "'");
}

InterpolantKind parse_interpolant(const std::string& s) {
  if (s == "di") return InterpolantKind::DI;
  if (s == "ddbi") return InterpolantKind::DDBI;
  throw ConfigError("interpolant.kind must be 'di' or 'ddbi', got '" + s + "'");
}

TimeSamplerKind parse_sampler(const std::string& s) {
  if (s == "uniform") return TimeSamplerKind::Uniform;
  if (s == "logit_normal" || s == "ln") return TimeSamplerKind::LogitNormal;
  if (s == "vi") return TimeSamplerKind::VarianceImportance;
  throw ConfigError("time_policy.sampler must be 'uniform', 'logit_normal' or 'vi'");
}

SupervisionKind parse_supervision(const std::string& s) {
  if (s == "cia") return SupervisionKind::CIA;
  if (s == "fixed_tangent_ratio") return SupervisionKind::FixedTangentRatio;
  throw ConfigError("time_policy.supervision must be 'cia' or 'fixed_tangent_ratio'");
}

GridSpec parse_grid(const json& j, const std::string& prefix) {
  check_keys(j, prefix, {"min", "max", "n"});
  GridSpec g;
  g.min = get_or(j, "min", g.min);
  g.max = get_or(j, "max", g.max);
  g.n = get_or(j, "n", g.n);
  if (g.n < 2 || !(g.max > g.min)) throw ConfigError(prefix + ": need n >= 2 and max > min");
  return g;
}

json grid_to_json(const GridSpec& g) {
  return json{{"min", g.min}, {"max", g.max}, {"n", g.n}};
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  check_keys(j, "", {"problem", "interpolant", "time_policy", "train", "eval", "out_dir", "seed"});
  ExperimentConfig cfg;

  if (!j.contains("problem")) throw ConfigError("missing config section: problem");
  cfg.problem = j.at("problem");
  make_problem(cfg.problem);  // validates now instead of at run time

  const json ji = j.value("interpolant", json::object());
  check_keys(ji, "interpolant",
             {"kind", "schedule", "gamma", "epsilon", "sigma_floor", "t_clip"});
  InterpolantSpec& spec = cfg.train.interpolant;
  spec.kind = parse_interpolant(get_or<std::string>(ji, "kind", "di"));
  spec.schedule.kind = parse_schedule(get_or<std::string>(ji, "schedule", "linear"));
  spec.gamma = get_or(ji, "gamma", spec.gamma);
  spec.epsilon = get_or(ji, "epsilon", spec.epsilon);
  spec.sigma_floor = get_or(ji, "sigma_floor", spec.sigma_floor);
  spec.t_clip = get_or(ji, "t_clip", spec.t_clip);
  if (spec.gamma < 0.0) throw ConfigError("interpolant.gamma must be >= 0");
  if (spec.epsilon < 0.0) throw ConfigError("interpolant.epsilon must be >= 0");

  const json jp = j.value("time_policy", json::object());
  check_keys(jp, "time_policy",
             {"sampler", "ln_mean", "ln_std", "supervision", "rho_sts", "d0", "anneal_fraction"});
  TimePairPolicy& pol = cfg.train.policy;
  pol.sampler = parse_sampler(get_or<std::string>(jp, "sampler", "uniform"));
  pol.ln_mean = get_or(jp, "ln_mean", pol.ln_mean);
  pol.ln_std = get_or(jp, "ln_std", pol.ln_std);
  pol.supervision = parse_supervision(get_or<std::string>(jp, "supervision", "cia"));
  pol.rho_sts = get_or(jp, "rho_sts", pol.rho_sts);
  pol.d0 = get_or(jp, "d0", pol.d0);
  pol.anneal_fraction = get_or(jp, "anneal_fraction", pol.anneal_fraction);
  if (pol.rho_sts < 0.0 || pol.rho_sts > 1.0)
    throw ConfigError("time_policy.rho_sts must be in [0, 1]");
  if (pol.d0 <= 0.0 || pol.d0 > 1.0) throw ConfigError("time_policy.d0 must be in (0, 1]");
  if (pol.anneal_fraction <= 0.0 || pol.anneal_fraction > 1.0)
    throw ConfigError("time_policy.anneal_fraction must be in (0, 1]");

  const json jt = j.value("train", json::object());
  check_keys(jt, "train",
             {"method", "steps", "batch_size", "lr", "beta1", "beta2", "eps_opt", "hidden",
              "time_freqs", "weighting", "grid_size", "grid_mc", "loss_log_every", "threads"});
  TrainConfig& tr = cfg.train;
  const std::string method = get_or<std::string>(jt, "method", "secant");
  if (method == "secant")
    tr.method = TrainMethod::Secant;
  else if (method == "tangent")
    tr.method = TrainMethod::Tangent;
  else
    throw ConfigError("train.method must be 'secant' or 'tangent'");
  tr.steps = get_or<std::int64_t>(jt, "steps", tr.steps);
  tr.batch_size = get_or(jt, "batch_size", tr.batch_size);
  tr.opt.lr = get_or(jt, "lr", tr.opt.lr);
  tr.opt.beta1 = get_or(jt, "beta1", tr.opt.beta1);
  tr.opt.beta2 = get_or(jt, "beta2", tr.opt.beta2);
  tr.opt.eps = get_or(jt, "eps_opt", tr.opt.eps);
  tr.hidden = get_or(jt, "hidden", tr.hidden);
  tr.time_freqs = get_or(jt, "time_freqs", tr.time_freqs);
  tr.weighting = get_or<std::string>(jt, "weighting", tr.weighting);
  tr.grid_size = get_or(jt, "grid_size", tr.grid_size);
  tr.grid_mc = get_or(jt, "grid_mc", tr.grid_mc);
  tr.loss_log_every = get_or(jt, "loss_log_every", tr.loss_log_every);
  tr.threads = get_or(jt, "threads", tr.threads);
  if (tr.steps < 0) throw ConfigError("train.steps must be >= 0");
  if (tr.batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
  if (tr.opt.lr <= 0.0) throw ConfigError("train.lr must be > 0");
  if (tr.weighting != "vi" && tr.weighting != "none")
    throw ConfigError("train.weighting must be 'vi' or 'none'");
  if (pol.sampler == TimeSamplerKind::VarianceImportance && tr.weighting != "vi")
    throw ConfigError("time_policy.sampler 'vi' requires train.weighting 'vi'");

  cfg.seed = get_or<std::uint64_t>(j, "seed", 0);
  tr.seed = cfg.seed;
  cfg.out_dir = get_or<std::string>(j, "out_dir", cfg.out_dir);

  const json je = j.value("eval", json::object());
  check_keys(je, "eval", {"nfe", "metric", "n_samples", "grid", "grid_dump", "seed"});
  cfg.eval.nfe = get_or(je, "nfe", cfg.eval.nfe);
  cfg.eval.metric = get_or<std::string>(je, "metric", cfg.eval.metric);
  cfg.eval.n_samples = get_or(je, "n_samples", cfg.eval.n_samples);
  if (je.contains("grid")) cfg.eval.grid = parse_grid(je.at("grid"), "eval.grid");
  if (je.contains("grid_dump"))
    cfg.eval.grid_dump = parse_grid(je.at("grid_dump"), "eval.grid_dump");
  cfg.eval.seed = get_or<std::uint64_t>(je, "seed", cfg.seed + 1000003);
  if (cfg.eval.metric != "ratio_mse" && cfg.eval.metric != "mi" && cfg.eval.metric != "nll")
    throw ConfigError("eval.metric must be 'ratio_mse', 'mi' or 'nll'");
  for (int k : cfg.eval.nfe)
    if (k < 1) throw ConfigError("eval.nfe entries must be >= 1");
  if (cfg.eval.n_samples < 1) throw ConfigError("eval.n_samples must be >= 1");

  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& cfg) {
  const TrainConfig& tr = cfg.train;
  const InterpolantSpec& spec = tr.interpolant;
  const TimePairPolicy& pol = tr.policy;
  json je = {{"nfe", cfg.eval.nfe},
             {"metric", cfg.eval.metric},
             {"n_samples", cfg.eval.n_samples},
             {"seed", cfg.eval.seed}};
  if (cfg.eval.grid) je["grid"] = grid_to_json(*cfg.eval.grid);
  if (cfg.eval.grid_dump) je["grid_dump"] = grid_to_json(*cfg.eval.grid_dump);
  return json{
      {"problem", cfg.problem},
      {"interpolant",
       {{"kind", spec.kind == InterpolantKind::DI ? "di" : "ddbi"},
        {"schedule", spec.schedule.kind == ScheduleKind::Linear ? "linear" : "vp"},
        {"gamma", spec.gamma},
        {"epsilon", spec.epsilon},
        {"sigma_floor", spec.sigma_floor},
        {"t_clip", spec.t_clip}}},
      {"time_policy",
       {{"sampler", sampler_name(pol.sampler)},
        {"ln_mean", pol.ln_mean},
        {"ln_std", pol.ln_std},
        {"supervision", pol.supervision == SupervisionKind::CIA ? "cia" : "fixed_tangent_ratio"},
        {"rho_sts", pol.rho_sts},
        {"d0", pol.d0},
        {"anneal_fraction", pol.anneal_fraction}}},
      {"train",
       {{"method", method_name(tr.method)},
        {"steps", tr.steps},
        {"batch_size", tr.batch_size},
        {"lr", tr.opt.lr},
        {"beta1", tr.opt.beta1},
        {"beta2", tr.opt.beta2},
        {"eps_opt", tr.opt.eps},
        {"hidden", tr.hidden},
        {"time_freqs", tr.time_freqs},
        {"weighting", tr.weighting},
        {"grid_size", tr.grid_size},
        {"grid_mc", tr.grid_mc},
        {"loss_log_every", tr.loss_log_every},
        {"threads", tr.threads}}},
      {"eval", je},
      {"out_dir", cfg.out_dir},
      {"seed", cfg.seed}};
}

BenchmarkProblem make_problem(const json& p) {
  check_keys(p, "problem",
             {"kind", "dim", "mean1", "cov1_diag", "target_mi", "family", "param", "shape",
              "noise"});
  const std::string kind = get_or<std::string>(p, "kind", "");
  if (kind.empty()) throw ConfigError("problem.kind is required");
  try {
    if (kind == "gaussian_ratio") {
      const int dim = get_or(p, "dim", 1);
      std::vector<double> mean1 = get_or(p, "mean1", std::vector<double>(dim, 0.0));
      std::vector<double> cov = get_or(p, "cov1_diag", std::vector<double>(dim, 1.0));
      return make_gaussian_ratio(dim, std::move(mean1), std::move(cov));
    }
    if (kind == "blockwise_gaussian_mi")
      return make_blockwise_gaussian_mi(get_or(p, "dim", 8), get_or(p, "target_mi", 2.0));
    if (kind == "pathological_mi")
      return make_pathological_mi(pathological_kind_from_name(get_or<std::string>(p, "family", "")),
                                  get_or(p, "param", 0.5));
    if (kind == "shape2d")
      return make_2d_shapes(shape_kind_from_name(get_or<std::string>(p, "shape", "")),
                            get_or(p, "noise", 0.1));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
  throw ConfigError("unknown problem.kind: " + kind);
}

std::string config_hash(const json& resolved) {
  const std::string dump = resolved.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::string method_name(TrainMethod m) { return m == TrainMethod::Secant ? "secant" : "tangent"; }

std::string sampler_name(TimeSamplerKind k) {
  switch (k) {
    case TimeSamplerKind::Uniform:
      return "uniform";
    case TimeSamplerKind::LogitNormal:
      return "logit_normal";
    case TimeSamplerKind::VarianceImportance:
      return "vi";
  }
  return "?";
}

std::string supervision_name(const TimePairPolicy& p) {
  if (p.supervision == SupervisionKind::CIA) return "cia";
  char buf[32];
  std::snprintf(buf, sizeof buf, "sts_%g", p.rho_sts);
  return std::string(buf);
}

ExperimentConfig preset_config(const std::string& name) {
  json j;
  if (name == "gauss1d") {
    j = {{"problem",
          {{"kind", "gaussian_ratio"}, {"dim", 1}, {"mean1", {1.0}}, {"cov1_diag", {1.0}}}},
         {"interpolant", {{"kind", "di"}, {"schedule", "linear"}}},
         {"time_policy", {{"sampler", "vi"}, {"supervision", "cia"}}},
         {"train", {{"steps", 2000}, {"batch_size", 512}}},
         {"eval",
          {{"nfe", {1, 2, 5, 10}},
           {"metric", "ratio_mse"},
           {"grid", {{"min", -2.0}, {"max", 3.0}, {"n", 101}}}}},
         {"out_dir", "runs/gauss1d"},
         {"seed", 7}};
  } else if (name == "blockwise8" || name == "blockwise8_tangent") {
    j = {{"problem", {{"kind", "blockwise_gaussian_mi"}, {"dim", 8}, {"target_mi", 2.0}}},
         {"interpolant", {{"kind", "di"}, {"schedule", "vp"}}},
         {"time_policy", {{"sampler", "vi"}, {"supervision", "cia"}}},
         {"train",
          {{"method", name == "blockwise8" ? "secant" : "tangent"},
           {"steps", 4000},
           {"batch_size", 256}}},
         {"eval", {{"nfe", {1, 2, 10}}, {"metric", "mi"}, {"n_samples", 8192}}},
         {"out_dir", "runs/" + name},
         {"seed", 11}};
    if (name == "blockwise8_tangent") j["eval"]["nfe"] = {2, 10};
  } else if (name == "edge_singular" || name == "additive_noise") {
    const bool edge = name == "edge_singular";
    j = {{"problem",
          {{"kind", "pathological_mi"},
           {"family", edge ? "edge_singular_gauss" : "additive_noise"},
           {"param", edge ? 0.9 : 0.45}}},
         {"interpolant", {{"kind", "ddbi"}, {"schedule", "vp"}, {"gamma", 0.1}}},
         {"time_policy", {{"sampler", "vi"}, {"supervision", "cia"}}},
         {"train", {{"steps", 3000}, {"batch_size", 256}}},
         {"eval", {{"nfe", {1, 2, 10}}, {"metric", "mi"}, {"n_samples", 8192}}},
         {"out_dir", "runs/" + name},
         {"seed", 13}};
  } else if (name == "eight_gaussians" || name == "eight_gaussians_tangent") {
    j = {{"problem", {{"kind", "shape2d"}, {"shape", "eight_gaussians"}, {"noise", 0.3}}},
         {"interpolant", {{"kind", "di"}, {"schedule", "vp"}}},
         {"time_policy", {{"sampler", "vi"}, {"supervision", "cia"}}},
         {"train",
          {{"method", name == "eight_gaussians" ? "secant" : "tangent"},
           {"steps", 3000},
           {"batch_size", 256}}},
         {"eval",
          {{"nfe", {2}},
           {"metric", "nll"},
           {"n_samples", 4096},
           {"grid_dump", {{"min", -4.0}, {"max", 4.0}, {"n", 80}}}}},
         {"out_dir", "runs/" + name},
         {"seed", 17}};
  } else {
    throw ConfigError("unknown preset: " + name);
  }
  return parse_config(j);
}

std::vector<std::string> preset_names() {
  return {"gauss1d",        "blockwise8",      "blockwise8_tangent",
          "edge_singular",  "additive_noise",  "eight_gaussians",
          "eight_gaussians_tangent"};
}

}  // namespace isadre
