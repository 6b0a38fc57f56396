#include "rsoc/adaptive.hpp"

#include <stdexcept>

namespace rsoc {

void AdaptiveSchedule::validate() const {
  if (eps0 < 0.0) throw std::invalid_argument("AdaptiveSchedule: eps0 < 0");
  if (!(alpha0 > 0.0)) throw std::invalid_argument("AdaptiveSchedule: alpha0 must be > 0");
  if (!(rho > 1.0) || !(gamma > 1.0)) {
    throw std::invalid_argument("AdaptiveSchedule: shrink factors must be > 1");
  }
  if (resolved_eps_target() > eps0) {
    throw std::invalid_argument("AdaptiveSchedule: eps_target > eps0");
  }
  if (resolved_alpha_target() > alpha0) {
    throw std::invalid_argument("AdaptiveSchedule: alpha_target > alpha0");
  }
  if (stall_budget < 1) throw std::invalid_argument("AdaptiveSchedule: stall_budget < 1");
  if (max_stages < 1) throw std::invalid_argument("AdaptiveSchedule: max_stages < 1");
}

AdaptiveReport solve_adaptive(const TrajectoryProblem& problem, const VecList& initial_controls,
                              const AdaptiveSchedule& schedule, const SolverSettings& settings,
                              const NoiseConfig& noise) {
  schedule.validate();
  settings.validate();

  AdaptiveReport report;
  VecList controls = initial_controls;
  double eps = schedule.eps0;
  double alpha_tol = schedule.alpha0;
  const double eps_target = schedule.resolved_eps_target();
  const double alpha_target = schedule.resolved_alpha_target();
  const bool degenerate = schedule.eps0 == 0.0;

  int remaining = settings.max_iterations;
  std::uint64_t epoch = 0;
  int stage = 0;
  int iter_offset = 0;
  bool budget_exhausted = false;
  SolveStatus last_status = SolveStatus::max_iterations;
  WarmStart handoff;  // previous stage's reference + gains (empty for stage 0)

  for (;;) {
    SolverSettings inner = settings;
    // The degenerate (eps0 == 0) cascade is a single plain solve with the
    // caller's own tolerance; only real stages get the scheduled one.
    inner.tolerance = degenerate ? settings.tolerance : alpha_tol;
    inner.max_iterations = degenerate ? remaining : std::min(schedule.stall_budget, remaining);

    NoiseConfig nc = noise;
    nc.eps = eps;

    StageContext ctx;
    ctx.stage = stage;
    ctx.iter_offset = iter_offset;
    ctx.epoch0 = epoch;
    ctx.warm = std::move(handoff);
    SolveReport rep = solve(problem, controls, inner, nc, ctx);

    AdaptiveStageInfo info;
    info.stage = stage;
    info.eps = eps;
    info.alpha_tol = alpha_tol;
    info.status = rep.status;
    info.stalled = rep.status != SolveStatus::converged;
    info.iterations = static_cast<int>(rep.iterations.size());
    info.warm_start_cost = rep.initial_cost;
    info.final_cost = rep.final_cost;
    report.stages.push_back(info);

    report.iterations.insert(report.iterations.end(), rep.iterations.begin(),
                             rep.iterations.end());
    controls = rep.trajectory.controls;
    handoff.reference = rep.trajectory;
    handoff.K = std::move(rep.gains_K);
    report.trajectory = std::move(rep.trajectory);
    report.final_cost = rep.final_cost;
    last_status = rep.status;

    iter_offset += info.iterations;
    remaining -= info.iterations;
    epoch = rep.final_epoch + 1;  // resample across stage boundaries
    stage += 1;
    eps /= schedule.rho;
    alpha_tol /= schedule.gamma;

    if (degenerate) break;
    if (remaining <= 0) {
      budget_exhausted = eps >= eps_target || alpha_tol >= alpha_target;
      break;
    }
    if ((eps < eps_target && alpha_tol < alpha_target) || stage >= schedule.max_stages) break;
  }

  report.status = budget_exhausted ? SolveStatus::max_iterations : last_status;
  return report;
}

}  // namespace rsoc
