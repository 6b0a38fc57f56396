#pragma once

#include "rsoc/ddp.hpp"
#include "rsoc/problem.hpp"

namespace rsoc {

// Whole-trajectory zero-th order baseline: gradient descent on the stacked
// open-loop control sequence, with the variance-reduced score estimate of
// grad J. Contrast with the smoothed DDP path: here the noise perturbs the
// entire control sequence of a raw rollout, not one timestep at a time.
struct ZerothOrderSettings {
  double eps = 0.1;
  int samples = 32;
  std::uint64_t seed = 0;
  double step_size = 1e-3;
  int max_iterations = 200;
  double tolerance = 0.0;  // on the gradient 2-norm; 0 = run the budget
  bool timing = false;
  std::function<void(const IterationRecord&, const Trajectory&)> observer;
  void validate() const;
};

// (1/(M_kept * eps)) * sum_i (J(u + eps*Z_i) - J(u)) * Z_i over the stacked
// control sequence; the unperturbed cost J(u) is the variance-reduction
// baseline. Samples whose rollout diverges are discarded and counted in
// *discarded; all samples discarded is an error.
Vec zeroth_order_gradient(const TrajectoryProblem& problem, const VecList& controls,
                          const ZerothOrderSettings& settings, std::uint64_t epoch,
                          int* discarded = nullptr);

// Plain fixed-step descent (the step halves only if the update itself blows
// up the rollout). Report rows reuse the DDP schema: qu_inf/qu_w hold the
// gradient infinity/2-norms and ls_alpha the applied step size.
SolveReport solve_zeroth(const TrajectoryProblem& problem, const VecList& initial_controls,
                         const ZerothOrderSettings& settings);

}  // namespace rsoc
