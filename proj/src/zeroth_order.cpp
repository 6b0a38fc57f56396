#include "rsoc/zeroth_order.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rsoc/parallel.hpp"
#include "rsoc/stats.hpp"

namespace rsoc {

void ZerothOrderSettings::validate() const {
  if (!(eps > 0.0)) throw std::invalid_argument("ZerothOrderSettings: eps must be > 0");
  if (samples < 1) throw std::invalid_argument("ZerothOrderSettings: samples < 1");
  if (!(step_size > 0.0)) throw std::invalid_argument("ZerothOrderSettings: step_size <= 0");
  if (max_iterations < 1) throw std::invalid_argument("ZerothOrderSettings: max_iterations < 1");
  if (tolerance < 0.0) throw std::invalid_argument("ZerothOrderSettings: tolerance < 0");
}

namespace {

// Rollout cost of raw dynamics; false when the rollout leaves finite range.
bool rollout_cost(const TrajectoryProblem& problem, const VecList& controls, double& cost,
                  Trajectory* traj_out) {
  try {
    Trajectory traj = rollout(*problem.dynamics, problem.initial_state, controls);
    for (const Vec& x : traj.states) {
      if (x.lpNorm<Eigen::Infinity>() > 1e12) return false;
    }
    cost = total_cost(problem, traj);
    if (!std::isfinite(cost)) return false;
    if (traj_out) *traj_out = std::move(traj);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

Vec zeroth_order_gradient(const TrajectoryProblem& problem, const VecList& controls,
                          const ZerothOrderSettings& settings, std::uint64_t epoch,
                          int* discarded) {
  problem.validate();
  settings.validate();
  const int N = problem.horizon;
  const int nu = problem.dynamics->control_dim();
  const int M = settings.samples;

  double base_cost = 0.0;
  if (!rollout_cost(problem, controls, base_cost, nullptr)) {
    throw DivergenceError("zeroth_order_gradient: baseline rollout diverged", -1);
  }

  NoiseConfig nc;
  nc.eps = settings.eps;
  nc.samples = M;
  nc.seed = settings.seed;
  std::vector<SampleSet> sets;
  sets.reserve(static_cast<std::size_t>(N));
  for (int t = 0; t < N; ++t) {
    sets.push_back(draw_sample_set(nc, epoch, static_cast<std::uint64_t>(t), nu));
  }

  VecList slot(static_cast<std::size_t>(M));
  std::vector<char> ok(static_cast<std::size_t>(M), 0);
  parallel_for_indexed(M, [&](int i) {
    const auto ii = static_cast<std::size_t>(i);
    VecList perturbed(static_cast<std::size_t>(N));
    Vec z_stacked(N * nu);
    for (int t = 0; t < N; ++t) {
      const Vec& z = sets[static_cast<std::size_t>(t)].z[ii];
      perturbed[static_cast<std::size_t>(t)] = controls[static_cast<std::size_t>(t)] +
                                               settings.eps * z;
      z_stacked.segment(t * nu, nu) = z;
    }
    double cost = 0.0;
    if (rollout_cost(problem, perturbed, cost, nullptr)) {
      slot[ii] = (cost - base_cost) * z_stacked;
      ok[ii] = 1;
    }
  });

  Vec g = Vec::Zero(N * nu);
  int kept = 0;
  for (int i = 0; i < M; ++i) {
    if (ok[static_cast<std::size_t>(i)]) {
      g += slot[static_cast<std::size_t>(i)];
      ++kept;
    }
  }
  if (discarded) *discarded = M - kept;
  if (kept == 0) {
    throw std::runtime_error("zeroth_order_gradient: all " + std::to_string(M) +
                             " sample rollouts diverged");
  }
  return g / (static_cast<double>(kept) * settings.eps);
}

SolveReport solve_zeroth(const TrajectoryProblem& problem, const VecList& initial_controls,
                         const ZerothOrderSettings& settings) {
  problem.validate();
  settings.validate();
  const int N = problem.horizon;
  if (static_cast<int>(initial_controls.size()) != N) {
    throw std::invalid_argument("solve_zeroth: control sequence length != horizon");
  }
  const int nu = problem.dynamics->control_dim();

  VecList controls = initial_controls;
  double cost = 0.0;
  Trajectory traj;
  if (!rollout_cost(problem, controls, cost, &traj)) {
    throw DivergenceError("solve_zeroth: initial rollout diverged", -1);
  }

  SolveReport report;
  report.initial_cost = cost;
  SolveStatus status = SolveStatus::max_iterations;

  for (int it = 1; it <= settings.max_iterations; ++it) {
    const auto t_start = std::chrono::steady_clock::now();
    const std::uint64_t epoch = static_cast<std::uint64_t>(it);
    const Vec g = zeroth_order_gradient(problem, controls, settings, epoch, nullptr);

    IterationRecord row;
    row.iter = it;
    row.stage = 0;
    row.qu_inf = g.lpNorm<Eigen::Infinity>();
    row.qu_w = g.norm();
    row.eps = settings.eps;
    row.alpha_tol = settings.tolerance;
    row.reg = 0.0;

    if (settings.tolerance > 0.0 && row.qu_w < settings.tolerance) {
      row.cost = cost;
      row.ls_alpha = 0.0;
      row.dyn_evals = dynamics_evals();
      if (settings.timing) {
        row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                                t_start)
                          .count();
      }
      report.iterations.push_back(row);
      if (settings.observer) settings.observer(row, traj);
      status = SolveStatus::converged;
      break;
    }

    // Fixed-step update; halve only when the new rollout leaves finite range.
    double eta = settings.step_size;
    bool moved = false;
    VecList next(static_cast<std::size_t>(N));
    double next_cost = 0.0;
    Trajectory next_traj;
    for (int attempt = 0; attempt < 40 && !moved; ++attempt) {
      for (int t = 0; t < N; ++t) {
        next[static_cast<std::size_t>(t)] =
            controls[static_cast<std::size_t>(t)] - eta * g.segment(t * nu, nu);
      }
      moved = rollout_cost(problem, next, next_cost, &next_traj);
      if (!moved) eta *= 0.5;
    }
    if (!moved) {
      row.cost = cost;
      row.ls_alpha = 0.0;
      row.dyn_evals = dynamics_evals();
      report.iterations.push_back(row);
      if (settings.observer) settings.observer(row, traj);
      status = SolveStatus::line_search_failed;
      break;
    }

    controls = std::move(next);
    cost = next_cost;
    traj = std::move(next_traj);

    row.cost = cost;
    row.ls_alpha = eta;
    row.dyn_evals = dynamics_evals();
    if (settings.timing) {
      row.wall_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start)
              .count();
    }
    report.iterations.push_back(row);
    if (settings.observer) settings.observer(row, traj);
  }

  report.status = status;
  report.trajectory = std::move(traj);
  report.final_cost = cost;
  report.final_epoch = 0;
  return report;
}

}  // namespace rsoc
