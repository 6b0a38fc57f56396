#include "rsoc/problem.hpp"

#include <string>

namespace rsoc {

void TrajectoryProblem::validate() const {
  if (!dynamics) throw std::invalid_argument("TrajectoryProblem: dynamics is null");
  if (!running_cost || !terminal_cost) {
    throw std::invalid_argument("TrajectoryProblem: cost terms are null");
  }
  if (horizon < 1) throw std::invalid_argument("TrajectoryProblem: horizon must be >= 1");
  if (initial_state.size() != dynamics->state_dim()) {
    throw std::invalid_argument("TrajectoryProblem: initial state dimension mismatch");
  }
}

Trajectory rollout(const DynamicsModel& model, const Vec& x0, const VecList& controls) {
  if (controls.empty()) throw std::invalid_argument("rollout: empty control sequence");
  if (x0.size() != model.state_dim()) {
    throw std::invalid_argument("rollout: initial state dimension mismatch");
  }
  Trajectory traj;
  const int N = static_cast<int>(controls.size());
  traj.states.reserve(static_cast<std::size_t>(N) + 1);
  traj.controls = controls;
  traj.states.push_back(x0);
  for (int t = 0; t < N; ++t) {
    Vec next = model.step(traj.states.back(), controls[static_cast<std::size_t>(t)]);
    if (!next.allFinite()) {
      throw DivergenceError("rollout: non-finite state after step " + std::to_string(t), t);
    }
    traj.states.push_back(std::move(next));
  }
  return traj;
}

double total_cost(const TrajectoryProblem& problem, const Trajectory& traj) {
  problem.validate();
  const int N = problem.horizon;
  if (traj.horizon() != N || static_cast<int>(traj.states.size()) != N + 1) {
    throw std::invalid_argument("total_cost: trajectory length mismatch");
  }
  double c = 0.0;
  for (int t = 0; t < N; ++t) {
    c += problem.running_cost->value(traj.states[static_cast<std::size_t>(t)],
                                     traj.controls[static_cast<std::size_t>(t)]);
  }
  c += problem.terminal_cost->value(traj.states.back());
  return c;
}

void cost_derivatives(const TrajectoryProblem& problem, const Trajectory& traj,
                      StageDerivatives& out) {
  const int N = problem.horizon;
  out.lx.resize(static_cast<std::size_t>(N));
  out.lu.resize(static_cast<std::size_t>(N));
  out.lxx.resize(static_cast<std::size_t>(N));
  out.lux.resize(static_cast<std::size_t>(N));
  out.luu.resize(static_cast<std::size_t>(N));
  for (int t = 0; t < N; ++t) {
    const auto ti = static_cast<std::size_t>(t);
    problem.running_cost->derivatives(traj.states[ti], traj.controls[ti], out.lx[ti], out.lu[ti],
                                      out.lxx[ti], out.lux[ti], out.luu[ti]);
  }
  problem.terminal_cost->derivatives(traj.states.back(), out.lNx, out.lNxx);
}

}  // namespace rsoc
