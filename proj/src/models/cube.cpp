#include <cmath>

#include "rsoc/contact.hpp"
#include "rsoc/models.hpp"

namespace rsoc {

Cube::Cube(const CubeParams& p) : DynamicsModel(4, 2, p.dt), p_(p) {}

Vec Cube::step_impl(const Vec& x, const Vec& u) const {
  const Eigen::Vector2d pos(x[0], x[1]);
  Vec v(2);
  v << x[2], x[3];
  Vec force(2);
  force << u[0], u[1] - p_.mass * p_.gravity;

  const Mat M = p_.mass * Mat::Identity(2, 2);
  Vec v_next = free_velocity(M, v, force, dt());

  if (pos[1] <= 0.0) {
    ContactProblem cp;
    cp.M = M;
    cp.v_free = v_next;
    cp.J.resize(2, 2);
    cp.J << 0.0, 1.0,  // normal: vertical velocity
        1.0, 0.0;      // tangential: horizontal velocity
    cp.c_ref.resize(2);
    cp.c_ref << baumgarte_reference(-pos[1], dt(), p_.erp), 0.0;
    cp.mu.resize(1);
    cp.mu << p_.mu;
    v_next = solve_ncp_pgs(cp, p_.contact_sweeps, p_.contact_tol, p_.contact_accept).v_post;
  }

  Vec next(4);
  next[0] = pos[0] + dt() * v_next[0];
  next[1] = pos[1] + dt() * v_next[1];
  next[2] = v_next[0];
  next[3] = v_next[1];
  return next;
}

}  // namespace rsoc
