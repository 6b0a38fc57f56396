#include <cmath>

#include "models/joint_friction.hpp"
#include "rsoc/models.hpp"

namespace rsoc {

Pendulum::Pendulum(const PendulumParams& p) : DynamicsModel(2, 1, p.dt), p_(p) {}

Vec Pendulum::step_impl(const Vec& x, const Vec& u) const {
  const double th = x[0], om = x[1];
  const double inertia = p_.mass * p_.length * p_.length;
  const double tau_nf = u[0] - p_.mass * p_.gravity * p_.length * std::sin(th);
  bool stick = false;
  const double fric = detail::joint_friction(om, tau_nf, p_.coulomb, p_.v_stick, stick);
  const double om_next = stick ? 0.0 : om + dt() * (tau_nf + fric) / inertia;
  Vec next(2);
  next[0] = th + dt() * om_next;
  next[1] = om_next;
  return next;
}

void Pendulum::jacobians(const Vec& x, const Vec& u, Mat& fx, Mat& fu) const {
  if (p_.coulomb > 0.0) {
    DynamicsModel::jacobians(x, u, fx, fu);
    return;
  }
  const double inertia = p_.mass * p_.length * p_.length;
  const double dom_dth = -dt() * p_.gravity * std::cos(x[0]) / p_.length;
  fx.resize(2, 2);
  fx << 1.0 + dt() * dom_dth, dt(), dom_dth, 1.0;
  fu.resize(2, 1);
  fu << dt() * dt() / inertia, dt() / inertia;
  (void)u;
}

double Pendulum::energy(const Vec& x) const {
  const double inertia = p_.mass * p_.length * p_.length;
  return 0.5 * inertia * x[1] * x[1] + p_.mass * p_.gravity * p_.length * (1.0 - std::cos(x[0]));
}

Eigen::Vector2d Pendulum::tip_position(const Vec& x) const {
  return {p_.length * std::sin(x[0]), -p_.length * std::cos(x[0])};
}

}  // namespace rsoc
