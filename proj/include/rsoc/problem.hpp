#pragma once

#include <memory>
#include <stdexcept>

#include "rsoc/cost.hpp"
#include "rsoc/model.hpp"
#include "rsoc/types.hpp"

namespace rsoc {

// N controls and N+1 states; states[t+1] = f(states[t], controls[t]).
struct Trajectory {
  VecList states;
  VecList controls;
  int horizon() const { return static_cast<int>(controls.size()); }
};

struct TrajectoryProblem {
  std::shared_ptr<const DynamicsModel> dynamics;
  std::shared_ptr<const StageCost> running_cost;
  std::shared_ptr<const TerminalCost> terminal_cost;
  Vec initial_state;
  int horizon = 0;

  void validate() const;
};

// Thrown when a rollout leaves the finite range; names the offending step.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, int timestep)
      : std::runtime_error(what), timestep_(timestep) {}
  int timestep() const { return timestep_; }

 private:
  int timestep_;
};

Trajectory rollout(const DynamicsModel& model, const Vec& x0, const VecList& controls);

double total_cost(const TrajectoryProblem& problem, const Trajectory& traj);

// Per-stage cost/dynamics expansions consumed by the backward pass. The
// dynamics Jacobians are filled by the caller (raw or smoothed); optional
// second-order dynamics tensors default to empty (Gauss-Newton).
struct StageDerivatives {
  MatList fx, fu;                  // N entries each
  VecList lx, lu;                  // N entries
  MatList lxx, lux, luu;           // N entries
  Vec lNx;                         // terminal gradient
  Mat lNxx;                        // terminal Hessian
  // fxx[t][i] is the Hessian of state coordinate i at stage t w.r.t. x (and
  // similarly fux: d2 f_i / du dx, fuu: d2 f_i / du du). Leave empty to drop
  // the second-order dynamics terms.
  std::vector<MatList> fxx, fux, fuu;
  int horizon() const { return static_cast<int>(fx.size()); }
};

// Fills the cost blocks of `out` (dynamics blocks untouched).
void cost_derivatives(const TrajectoryProblem& problem, const Trajectory& traj,
                      StageDerivatives& out);

}  // namespace rsoc
