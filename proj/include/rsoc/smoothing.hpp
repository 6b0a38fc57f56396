#pragma once

#include "rsoc/model.hpp"
#include "rsoc/noise.hpp"
#include "rsoc/types.hpp"

namespace rsoc {

// Monte-Carlo mean of f(x, u + eps*z_i) over the sample set. The state is
// never perturbed, only the control. eps == 0 collapses to a single raw
// step(x, u) bit-exactly (no extra evaluations, whatever M is). Sample
// evaluations may fan out across the worker pool; accumulation is always in
// sample-index order, so the result is schedule-independent.
Vec smoothed_step(const DynamicsModel& model, const Vec& x, const Vec& u,
                  const SampleSet& samples, double eps);
Vec smoothed_step_serial(const DynamicsModel& model, const Vec& x, const Vec& u,
                         const SampleSet& samples, double eps);

// Mean of the model Jacobians evaluated at (x, u + eps*z_i). eps == 0 returns
// the raw Jacobians from a single evaluation.
void smoothed_jacobians_first_order(const DynamicsModel& model, const Vec& x, const Vec& u,
                                    const SampleSet& samples, double eps, Mat& fx, Mat& fu);
void smoothed_jacobians_first_order_serial(const DynamicsModel& model, const Vec& x, const Vec& u,
                                           const SampleSet& samples, double eps, Mat& fx, Mat& fu);

// Variance-reduced derivative-free estimate of the smoothed control Jacobian:
//   (1/(M*eps)) * sum_i (f(x, u + eps*z_i) - f(x, u)) * z_i^T.
// The subtracted unperturbed step is the baseline term. Requires eps > 0.
Mat smoothed_jacobian_zeroth_order(const DynamicsModel& model, const Vec& x, const Vec& u,
                                   const SampleSet& samples, double eps);
Mat smoothed_jacobian_zeroth_order_serial(const DynamicsModel& model, const Vec& x, const Vec& u,
                                          const SampleSet& samples, double eps);

// State Jacobian of the smoothed step by central differences over x with the
// same frozen samples (companion to the zeroth-order control estimate, which
// never touches model Jacobians).
Mat smoothed_fx_finite_diff(const DynamicsModel& model, const Vec& x, const Vec& u,
                            const SampleSet& samples, double eps, double h);

}  // namespace rsoc
