#pragma once

#include <stdexcept>

#include "rsoc/types.hpp"

namespace rsoc {

// Discrete-time dynamics x' = f(x, u), one fixed-dt step per call.
// step() is const and safe to call concurrently from the sample kernels.
class DynamicsModel {
 public:
  DynamicsModel(int state_dim, int control_dim, double dt);
  virtual ~DynamicsModel() = default;

  int state_dim() const { return state_dim_; }
  int control_dim() const { return control_dim_; }
  double dt() const { return dt_; }

  // Checks dimensions, counts the evaluation, delegates to step_impl.
  Vec step(const Vec& x, const Vec& u) const;

  // f_x (n_x by n_x) and f_u (n_x by n_u). Default: central finite
  // differences of step(); smooth models override with analytic forms.
  virtual void jacobians(const Vec& x, const Vec& u, Mat& fx, Mat& fu) const;

  // Finite-difference step size used by the default jacobians(). Contact
  // models pick a larger value than the smooth default to stand clear of the
  // inner solver's tolerance.
  virtual double fd_step() const { return 1e-6; }

 protected:
  virtual Vec step_impl(const Vec& x, const Vec& u) const = 0;

 private:
  int state_dim_;
  int control_dim_;
  double dt_;
};

// Central differences column by column, with per-column step h*max(1,|y_j|).
void finite_diff_jacobians(const DynamicsModel& model, const Vec& x, const Vec& u, double h,
                           Mat& fx, Mat& fu);

}  // namespace rsoc
