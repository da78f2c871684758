#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "isadre/benchmarks.hpp"
#include "isadre/training.hpp"

namespace isadre {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  double min = -2.0;
  double max = 3.0;
  int n = 101;
};

struct EvalSpec {
  std::vector<int> nfe = {1};
  std::string metric = "ratio_mse";  // ratio_mse | mi | nll
  int n_samples = 4096;
  std::optional<GridSpec> grid;       // 1-D oracle grid for ratio_mse
  std::optional<GridSpec> grid_dump;  // 2-D log-density lattice dump
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  nlohmann::json problem;  // heterogeneous per-problem parameters
  TrainConfig train;
  EvalSpec eval;
  std::string out_dir = "runs/out";
  std::uint64_t seed = 0;
};

// Parses and validates; unknown keys are rejected with the offending key
// named. Defaults are filled so to_json always emits the resolved form.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

BenchmarkProblem make_problem(const nlohmann::json& problem_spec);

// FNV-1a 64 of the canonical resolved dump, as hex.
std::string config_hash(const nlohmann::json& resolved);

// Named experiment presets used by `isadre bench` and the acceptance suite.
ExperimentConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

std::string method_name(TrainMethod m);
std::string sampler_name(TimeSamplerKind k);
std::string supervision_name(const TimePairPolicy& p);

}  // namespace isadre
