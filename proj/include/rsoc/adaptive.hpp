#pragma once

#include "rsoc/ddp.hpp"

namespace rsoc {

// Geometric noise/tolerance cascade. Each stage runs an inner solve at fixed
// eps with termination tolerance alpha_tol, then both shrink (eps /= rho,
// alpha_tol /= gamma) until both fall below their targets. Negative targets
// resolve to initial/16.
struct AdaptiveSchedule {
  double eps0 = 0.1;
  double alpha0 = 1e-2;
  double eps_target = -1.0;
  double alpha_target = -1.0;
  double rho = 2.0;
  double gamma = 2.0;
  int stall_budget = 50;  // inner iterations before a forced stage advance
  int max_stages = 64;    // hard cap (needed when eps_target == 0)

  double resolved_eps_target() const { return eps_target < 0.0 ? eps0 / 16.0 : eps_target; }
  double resolved_alpha_target() const {
    return alpha_target < 0.0 ? alpha0 / 16.0 : alpha_target;
  }
  void validate() const;
};

struct AdaptiveStageInfo {
  int stage = 0;
  double eps = 0.0;
  double alpha_tol = 0.0;
  SolveStatus status = SolveStatus::max_iterations;
  bool stalled = false;  // stage advanced without meeting alpha_tol
  int iterations = 0;
  double warm_start_cost = 0.0;  // previous controls re-evaluated under this stage's eps
  double final_cost = 0.0;
};

struct AdaptiveReport {
  SolveStatus status = SolveStatus::max_iterations;
  std::vector<IterationRecord> iterations;  // concatenated inner reports
  std::vector<AdaptiveStageInfo> stages;
  Trajectory trajectory;
  double final_cost = 0.0;
};

// settings.max_iterations is the global budget across all stages; each stage
// gets min(stall_budget, remaining). settings.tolerance is ignored (the
// schedule supplies per-stage tolerances). eps0 == 0 degenerates to a single
// plain-DDP stage over the full budget, making the smoothed solver with zero
// noise bit-identical to the plain one.
AdaptiveReport solve_adaptive(const TrajectoryProblem& problem, const VecList& initial_controls,
                              const AdaptiveSchedule& schedule, const SolverSettings& settings,
                              const NoiseConfig& noise);

}  // namespace rsoc
