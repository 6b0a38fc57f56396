#include "rsoc/model.hpp"

#include <cmath>

#include "rsoc/stats.hpp"

namespace rsoc {

DynamicsModel::DynamicsModel(int state_dim, int control_dim, double dt)
    : state_dim_(state_dim), control_dim_(control_dim), dt_(dt) {
  if (state_dim < 1 || control_dim < 1) {
    throw std::invalid_argument("DynamicsModel: dimensions must be positive");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("DynamicsModel: dt must be positive");
}

Vec DynamicsModel::step(const Vec& x, const Vec& u) const {
  if (x.size() != state_dim_ || u.size() != control_dim_) {
    throw std::invalid_argument("DynamicsModel::step: dimension mismatch");
  }
  count_dynamics_eval();
  return step_impl(x, u);
}

void DynamicsModel::jacobians(const Vec& x, const Vec& u, Mat& fx, Mat& fu) const {
  finite_diff_jacobians(*this, x, u, fd_step(), fx, fu);
}

void finite_diff_jacobians(const DynamicsModel& model, const Vec& x, const Vec& u, double h,
                           Mat& fx, Mat& fu) {
  const int nx = model.state_dim();
  const int nu = model.control_dim();
  fx.resize(nx, nx);
  fu.resize(nx, nu);
  Vec xp = x, xm = x, up = u, um = u;
  for (int j = 0; j < nx; ++j) {
    const double hj = h * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + hj;
    xm[j] = x[j] - hj;
    fx.col(j) = (model.step(xp, u) - model.step(xm, u)) / (2.0 * hj);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  for (int j = 0; j < nu; ++j) {
    const double hj = h * std::max(1.0, std::abs(u[j]));
    up[j] = u[j] + hj;
    um[j] = u[j] - hj;
    fu.col(j) = (model.step(x, up) - model.step(x, um)) / (2.0 * hj);
    up[j] = u[j];
    um[j] = u[j];
  }
}

}  // namespace rsoc
