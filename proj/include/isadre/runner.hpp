#pragma once

#include <string>
#include <vector>

#include "isadre/config.hpp"

namespace isadre {

struct TrainOutputs {
  std::string checkpoint_path;
  std::string metrics_path;
  std::string config_path;
  double final_loss = 0.0;
  std::int64_t steps = 0;
};

// Runs training from a resolved config; writes checkpoint.bin, metrics.csv
// and resolved_config.json into the output directory.
TrainOutputs run_train(const ExperimentConfig& cfg);

struct EvalRow {
  std::string method;
  std::string sampler;
  std::string supervision;
  int nfe = 0;
  std::string metric;
  double value = 0.0;
  double stderr_ = 0.0;
  std::uint64_t seed = 0;
  std::string config_hash;
};

// Evaluates a checkpoint per NFE in the eval spec and appends rows to
// report.csv (column order: method,sampler,supervision,nfe,metric,value,
// stderr,seed,config_hash). Emits grid_density.csv when a 2-D dump is
// configured.
std::vector<EvalRow> run_eval(const ExperimentConfig& cfg, const std::string& checkpoint_path);

void write_report_csv(const std::string& path, const std::vector<EvalRow>& rows, bool append);

}  // namespace isadre
