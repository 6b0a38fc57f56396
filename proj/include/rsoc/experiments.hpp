#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rsoc/adaptive.hpp"
#include "rsoc/config.hpp"
#include "rsoc/cost.hpp"
#include "rsoc/ddp.hpp"
#include "rsoc/problem.hpp"

namespace rsoc {

struct ExperimentDescriptor {
  std::string name;
  std::string summary;
  Config defaults;  // every key the experiment consumes, with default values
};

// The ten benchmark experiments, in registry order.
const std::vector<ExperimentDescriptor>& experiment_registry();
const ExperimentDescriptor& find_experiment(const std::string& name);

// Model + cost assembled from a resolved config; `goal` backs the task
// metric, `dt` the trajectory timestamps.
struct BuiltProblem {
  TrajectoryProblem problem;
  std::shared_ptr<QuadraticGoalCost> goal;
  double dt = 0.0;
};

BuiltProblem build_problem(const Config& cfg);

struct ExperimentResult {
  int exit_code = 1;  // 0 threshold met, 2 completed but missed, 1 error
  bool success = false;
  std::string metric_name;
  double metric = 0.0;
  double threshold = 0.0;
  double final_cost = 0.0;  // final controls re-rolled through the raw model
  std::vector<IterationRecord> rows;
  Trajectory trajectory;  // raw rollout of the final controls
  Config resolved;
};

// Merges `overrides` over the registry defaults for its experiment.name,
// runs the configured solver and writes report.csv, trajectory.csv,
// config.resolved and (optionally) plot.svg into out_dir.
ExperimentResult run_experiment(const Config& overrides, const std::string& out_dir,
                                bool plot);

// Overlay of >= 2 completed run directories of the same experiment: writes
// compare.csv (long format keyed by run label) and compare.svg to out_dir.
void compare_runs(const std::vector<std::string>& run_dirs, const std::string& out_dir);

}  // namespace rsoc
