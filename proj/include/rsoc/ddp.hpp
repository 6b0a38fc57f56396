#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rsoc/noise.hpp"
#include "rsoc/problem.hpp"

namespace rsoc {

enum class GradientEstimator { first_order, zeroth_order };

enum class SolveStatus { converged, max_iterations, line_search_failed, regularization_limit };

const char* to_string(SolveStatus s);

// One report row per solver iteration (accepted, rejected, or terminal).
struct IterationRecord {
  int iter = 0;       // global 1-based index, monotone across adaptive stages
  int stage = 0;      // sub-problem index; 0 for plain solves
  double cost = 0.0;  // reference cost after this iteration (under this epoch's noise)
  double qu_inf = 0.0;
  double qu_w = 0.0;  // sqrt(sum_t Qu' Quu^-1 Qu), the weighted termination norm
  double eps = 0.0;
  double alpha_tol = 0.0;
  double ls_alpha = 0.0;  // accepted line-search step; 0 when nothing was accepted
  double reg = 0.0;
  std::int64_t dyn_evals = 0;  // cumulative dynamics steps at row time
  double wall_ms = 0.0;        // 0 unless timing is enabled (kept deterministic)
};

struct SolverSettings {
  int max_iterations = 100;
  double tolerance = 1e-6;  // on qu_w; 0 = run the full budget
  double reg_init = 1e-9;
  double reg_min = 1e-9;
  double reg_max = 1e6;
  double reg_increase = 10.0;
  double reg_decrease = 0.5;
  int ls_steps = 11;  // ladder 1, 1/2, ..., 2^-(ls_steps-1)
  double acceptance_ratio = 1e-4;
  // Warm-start handoff policy. False: replay the warm-start controls open
  // loop and only switch to the gain-tracked rollout when it is decisively
  // cheaper (keeps the exploratory state wander that noise re-draws provide).
  // True: always start from the tracked rollout unless it diverges -- for
  // systems whose open-loop replay degrades too fast to be a useful start
  // even when its cost looks acceptable.
  bool track_handoff = false;
  GradientEstimator estimator = GradientEstimator::first_order;
  bool timing = false;
  // Called once per iteration with the row and the current reference
  // trajectory (after acceptance). Used by experiments to track task metrics
  // without touching the report schema.
  std::function<void(const IterationRecord&, const Trajectory&)> observer;

  void validate() const;
};

struct BackwardPassOutput {
  VecList k;
  MatList K;
  double d1 = 0.0;  // sum_t k'Qu   (expected cost change: a*d1 + 0.5*a^2*d2)
  double d2 = 0.0;  // sum_t k'(Quu+reg)k
  double qu_inf = 0.0;
  double qu_w = 0.0;
  Vec vx0;  // value gradient at t=0
  bool success = false;
  int failure_stage = -1;
};

// Rollout map for one solver iteration: the raw model when eps == 0,
// otherwise the smoothed dynamics under this epoch's frozen sample sets.
// Materializing it once per iteration is what implements common random
// numbers: the backward pass and every line-search trial see the same noise.
class EpochDynamics {
 public:
  EpochDynamics(const DynamicsModel& model, const NoiseConfig& noise, std::uint64_t epoch,
                int horizon);
  Vec step(int t, const Vec& x, const Vec& u) const;
  void step_jacobians(int t, const Vec& x, const Vec& u, GradientEstimator estimator, Mat& fx,
                      Mat& fu) const;
  double eps() const { return noise_.eps; }
  std::uint64_t epoch() const { return epoch_; }
  const DynamicsModel& model() const { return model_; }

 private:
  const DynamicsModel& model_;
  NoiseConfig noise_;
  std::uint64_t epoch_;
  std::vector<SampleSet> samples_;  // one per timestep; empty when eps == 0
};

struct SolveReport {
  SolveStatus status = SolveStatus::max_iterations;
  std::vector<IterationRecord> iterations;
  Trajectory trajectory;  // final reference trajectory under the solve dynamics
  MatList gains_K;        // feedback gains of the last accepted pass (may be empty)
  double initial_cost = 0.0;  // warm-start cost under this solve's noise
  double final_cost = 0.0;
  std::uint64_t final_epoch = 0;
};

BackwardPassOutput backward_pass(const Trajectory& traj, const StageDerivatives& derivs,
                                 const SolverSettings& settings, double reg);

struct ForwardPassResult {
  Trajectory trajectory;
  double cost = 0.0;
  bool diverged = false;
};

// Closed-loop rollout u = u_ref + alpha*k + K(x - x_ref) through the epoch
// dynamics. Divergence (non-finite state, contact solver failure) marks the
// trial rejected instead of propagating.
ForwardPassResult forward_pass(const TrajectoryProblem& problem, const EpochDynamics& dyn,
                               const Trajectory& ref, const BackwardPassOutput& gains,
                               double alpha);

// Open-loop rollout of `controls` through the epoch dynamics, with cost.
ForwardPassResult rollout_epoch(const TrajectoryProblem& problem, const EpochDynamics& dyn,
                                const VecList& controls);

// Warm start carried across annealing stages: the previous stage's accepted
// reference plus its feedback gains. The initial rollout of the next solve
// can either replay `reference.controls` open loop (default, preserves the
// exploratory wander of the new noise epoch) or track the reference with
// u = u_ref + K*(x - x_ref) (see SolverSettings::track_handoff); open-loop
// replay of an unstable system under fresh noise can land arbitrarily far
// from the trajectory the controls were tuned for.
struct WarmStart {
  Trajectory reference;
  MatList K;
  bool valid() const {
    return !reference.controls.empty() && K.size() == reference.controls.size() &&
           reference.states.size() == reference.controls.size() + 1;
  }
};

// Adaptive-cascade plumbing: stage tag, global iteration offset, starting
// noise epoch. Plain solves use the defaults.
struct StageContext {
  int stage = 0;
  int iter_offset = 0;
  std::uint64_t epoch0 = 0;
  WarmStart warm;
};

SolveReport solve(const TrajectoryProblem& problem, const VecList& initial_controls,
                  const SolverSettings& settings, const NoiseConfig& noise = {},
                  const StageContext& ctx = {});

}  // namespace rsoc
