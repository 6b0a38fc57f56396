#include <cmath>

#include "models/joint_friction.hpp"
#include "rsoc/models.hpp"

namespace rsoc {

Cartpole::Cartpole(const CartpoleParams& p) : DynamicsModel(4, 1, p.dt), p_(p) {}

Vec Cartpole::step_impl(const Vec& x, const Vec& u) const {
  const double th = x[1], sd = x[2], thd = x[3];
  const double mc = p_.cart_mass, mp = p_.pole_mass, l = p_.pole_length;
  const double c = std::cos(th), s = std::sin(th);

  Eigen::Matrix2d M;
  M << mc + mp, mp * l * c, mp * l * c, mp * l * l;
  // Coriolis/centrifugal + gravity, moved to the right-hand side.
  Eigen::Vector2d bias(-mp * l * s * thd * thd, mp * p_.gravity * l * s);
  Eigen::Vector2d tau_nf(u[0] - bias[0], -bias[1]);

  Eigen::Array<bool, Eigen::Dynamic, 1> stick;
  const Eigen::VectorXd acc = detail::coupled_joint_friction(
      M, tau_nf, Eigen::Vector2d(p_.coulomb_cart, p_.coulomb_pole),
      Eigen::Vector2d(sd, thd), p_.v_stick, stick);
  Eigen::Vector2d v_next(sd + dt() * acc[0], thd + dt() * acc[1]);
  if (stick[0]) v_next[0] = 0.0;
  if (stick[1]) v_next[1] = 0.0;

  Vec next(4);
  next[0] = x[0] + dt() * v_next[0];
  next[1] = th + dt() * v_next[1];
  next[2] = v_next[0];
  next[3] = v_next[1];
  return next;
}

double Cartpole::energy(const Vec& x) const {
  const double th = x[1], sd = x[2], thd = x[3];
  const double mc = p_.cart_mass, mp = p_.pole_mass, l = p_.pole_length;
  const double c = std::cos(th);
  const double kinetic = 0.5 * (mc + mp) * sd * sd + mp * l * c * sd * thd +
                         0.5 * mp * l * l * thd * thd;
  const double potential = -mp * p_.gravity * l * c;
  return kinetic + potential;
}

Eigen::Vector2d Cartpole::tip_position(const Vec& x) const {
  return {x[0] + p_.pole_length * std::sin(x[1]), -p_.pole_length * std::cos(x[1])};
}

}  // namespace rsoc
