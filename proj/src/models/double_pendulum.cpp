#include <cmath>

#include "models/joint_friction.hpp"
#include "rsoc/models.hpp"

namespace rsoc {

DoublePendulum::DoublePendulum(const DoublePendulumParams& p) : DynamicsModel(4, 2, p.dt), p_(p) {}

Mat DoublePendulum::mass_matrix(const Vec& x) const {
  const double c2 = std::cos(x[1]);
  const double m1 = p_.m1, m2 = p_.m2, l1 = p_.l1, l2 = p_.l2;
  Mat M(2, 2);
  M(0, 0) = (m1 + m2) * l1 * l1 + m2 * l2 * l2 + 2.0 * m2 * l1 * l2 * c2;
  M(0, 1) = M(1, 0) = m2 * l2 * l2 + m2 * l1 * l2 * c2;
  M(1, 1) = m2 * l2 * l2;
  return M;
}

Vec DoublePendulum::step_impl(const Vec& x, const Vec& u) const {
  const double q1 = x[0], q2 = x[1], v1 = x[2], v2 = x[3];
  const double m1 = p_.m1, m2 = p_.m2, l1 = p_.l1, l2 = p_.l2, g = p_.gravity;
  const double s2 = std::sin(q2);

  const Mat M = mass_matrix(x);
  const double h = m2 * l1 * l2 * s2;
  Eigen::Vector2d coriolis(-h * (2.0 * v1 * v2 + v2 * v2), h * v1 * v1);
  Eigen::Vector2d grav((m1 + m2) * g * l1 * std::sin(q1) + m2 * g * l2 * std::sin(q1 + q2),
                       m2 * g * l2 * std::sin(q1 + q2));
  Eigen::Vector2d tau_nf(u[0] - coriolis[0] - grav[0], u[1] - coriolis[1] - grav[1]);

  Eigen::Array<bool, Eigen::Dynamic, 1> stick;
  const Eigen::VectorXd acc = detail::coupled_joint_friction(
      M, tau_nf, Eigen::Vector2d(p_.coulomb1, p_.coulomb2), Eigen::Vector2d(v1, v2),
      p_.v_stick, stick);
  Eigen::Vector2d v_next(v1 + dt() * acc[0], v2 + dt() * acc[1]);
  if (stick[0]) v_next[0] = 0.0;
  if (stick[1]) v_next[1] = 0.0;

  Vec next(4);
  next[0] = q1 + dt() * v_next[0];
  next[1] = q2 + dt() * v_next[1];
  next[2] = v_next[0];
  next[3] = v_next[1];
  return next;
}

double DoublePendulum::energy(const Vec& x) const {
  const Mat M = mass_matrix(x);
  const Eigen::Vector2d v(x[2], x[3]);
  const double kinetic = 0.5 * v.dot(M * v);
  const double potential = -(p_.m1 + p_.m2) * p_.gravity * p_.l1 * std::cos(x[0]) -
                           p_.m2 * p_.gravity * p_.l2 * std::cos(x[0] + x[1]);
  return kinetic + potential;
}

Eigen::Vector2d DoublePendulum::tip_position(const Vec& x) const {
  return {p_.l1 * std::sin(x[0]) + p_.l2 * std::sin(x[0] + x[1]),
          -p_.l1 * std::cos(x[0]) - p_.l2 * std::cos(x[0] + x[1])};
}

}  // namespace rsoc
