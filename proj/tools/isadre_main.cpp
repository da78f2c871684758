// Command line front end: train / eval / verify / bench.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "isadre/config.hpp"
#include "isadre/runner.hpp"
#include "isadre/verify.hpp"

namespace {

void apply_overrides(isadre::ExperimentConfig& cfg, const std::string& out_dir,
                     const std::optional<std::uint64_t>& seed, int threads) {
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (seed) {
    cfg.seed = *seed;
    cfg.train.seed = *seed;
    cfg.eval.seed = *seed + 1000003;
  }
  if (threads > 0) cfg.train.threads = threads;
}

void print_rows(const std::vector<isadre::EvalRow>& rows) {
  for (const auto& r : rows)
    std::printf("%s,%s,%s,%d,%s,%.6g,%.3g,%llu,%s\n", r.method.c_str(), r.sampler.c_str(),
                r.supervision.c_str(), r.nfe, r.metric.c_str(), r.value, r.stderr_,
                static_cast<unsigned long long>(r.seed), r.config_hash.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ISA-DRE: secant-based density ratio estimation"};
  app.require_subcommand(1);

  std::string config_path, checkpoint_path, out_dir, preset;
  std::optional<std::uint64_t> seed;
  int threads = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config_path, "experiment config (json)");
    if (needs_config) opt->required();
    cmd->add_option("--out", out_dir, "output directory override");
    cmd->add_option("--seed", seed, "seed override");
    cmd->add_option("--threads", threads, "evaluation threads");
  };

  auto* cmd_train = app.add_subcommand("train", "train a model from a config");
  add_common(cmd_train, true);

  auto* cmd_eval = app.add_subcommand("eval", "evaluate a checkpoint per NFE");
  add_common(cmd_eval, true);
  cmd_eval->add_option("--checkpoint", checkpoint_path, "model checkpoint")->required();

  auto* cmd_verify = app.add_subcommand("verify", "run the property battery");
  cmd_verify->add_option("--seed", seed, "seed override");

  auto* cmd_bench = app.add_subcommand("bench", "run a named preset (train + eval)");
  cmd_bench->add_option("name", preset, "preset name")->required();
  cmd_bench->add_option("--out", out_dir, "output directory override");
  cmd_bench->add_option("--seed", seed, "seed override");
  cmd_bench->add_option("--threads", threads, "evaluation threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_train->parsed()) {
      auto cfg = isadre::load_config_file(config_path);
      apply_overrides(cfg, out_dir, seed, threads);
      const auto out = isadre::run_train(cfg);
      std::printf("trained %lld steps, final loss %.6g\n",
                  static_cast<long long>(out.steps), out.final_loss);
      std::printf("checkpoint: %s\nmetrics: %s\n", out.checkpoint_path.c_str(),
                  out.metrics_path.c_str());
    } else if (cmd_eval->parsed()) {
      auto cfg = isadre::load_config_file(config_path);
      apply_overrides(cfg, out_dir, seed, threads);
      print_rows(isadre::run_eval(cfg, checkpoint_path));
    } else if (cmd_verify->parsed()) {
      const auto results = isadre::run_verification(seed.value_or(20240801), true);
      bool all = true;
      for (const auto& r : results) {
        std::printf("[%s] %-32s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        all = all && r.pass;
      }
      if (!all) return 1;
    } else if (cmd_bench->parsed()) {
      auto cfg = isadre::preset_config(preset);
      apply_overrides(cfg, out_dir, seed, threads);
      const auto out = isadre::run_train(cfg);
      std::printf("trained %lld steps, final loss %.6g\n",
                  static_cast<long long>(out.steps), out.final_loss);
      print_rows(isadre::run_eval(cfg, out.checkpoint_path));
    }
  } catch (const isadre::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
