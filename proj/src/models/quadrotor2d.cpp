#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rsoc/contact.hpp"
#include "rsoc/models.hpp"

namespace rsoc {

Quadrotor2d::Quadrotor2d(const Quadrotor2dParams& p) : DynamicsModel(6, 2, p.dt), p_(p) {}

double Quadrotor2d::min_skid_height(const Vec& x) const {
  const double c = std::cos(x[2]), s = std::sin(x[2]);
  double lo = std::numeric_limits<double>::infinity();
  for (const double side : {-1.0, 1.0}) {
    const Eigen::Vector2d d(side * p_.skid_half_width, -p_.skid_drop);
    lo = std::min(lo, x[1] + s * d[0] + c * d[1]);
  }
  return lo;
}

Vec Quadrotor2d::step_impl(const Vec& x, const Vec& u) const {
  const double th = x[2];
  const double c = std::cos(th), s = std::sin(th);
  const double f1 = std::clamp(u[0], 0.0, p_.thrust_max);
  const double f2 = std::clamp(u[1], 0.0, p_.thrust_max);
  const double thrust = f1 + f2;

  Vec v(3);
  v << x[3], x[4], x[5];
  Vec force(3);
  force << -thrust * s, thrust * c - p_.mass * p_.gravity, p_.arm * (f1 - f2);

  Mat M = Mat::Zero(3, 3);
  M(0, 0) = M(1, 1) = p_.mass;
  M(2, 2) = p_.inertia;
  Vec v_next = free_velocity(M, v, force, dt());

  // Skid contact points in the body frame; rows per active contact are
  // (normal = vertical point velocity, tangential = horizontal).
  std::vector<Eigen::Vector2d> r;  // world-frame offsets of active points
  std::vector<double> depth;
  for (const double side : {-1.0, 1.0}) {
    const Eigen::Vector2d d(side * p_.skid_half_width, -p_.skid_drop);
    const Eigen::Vector2d rw(c * d[0] - s * d[1], s * d[0] + c * d[1]);
    const double gap = x[1] + rw[1];
    if (gap <= 0.0) {
      r.push_back(rw);
      depth.push_back(-gap);
    }
  }
  if (!r.empty()) {
    const int nc = static_cast<int>(r.size());
    ContactProblem cp;
    cp.M = M;
    cp.v_free = v_next;
    cp.J = Mat::Zero(2 * nc, 3);
    cp.c_ref = Vec::Zero(2 * nc);
    cp.mu = Vec::Constant(nc, p_.mu);
    for (int k = 0; k < nc; ++k) {
      // point velocity = (vx - om*r_z, vz + om*r_x)
      cp.J(2 * k, 1) = 1.0;
      cp.J(2 * k, 2) = r[static_cast<std::size_t>(k)][0];
      cp.J(2 * k + 1, 0) = 1.0;
      cp.J(2 * k + 1, 2) = -r[static_cast<std::size_t>(k)][1];
      cp.c_ref[2 * k] = baumgarte_reference(depth[static_cast<std::size_t>(k)], dt(), p_.erp);
    }
    v_next = solve_ncp_pgs(cp, p_.contact_sweeps, p_.contact_tol, p_.contact_accept).v_post;
  }

  Vec next(6);
  next[0] = x[0] + dt() * v_next[0];
  next[1] = x[1] + dt() * v_next[1];
  next[2] = th + dt() * v_next[2];
  next[3] = v_next[0];
  next[4] = v_next[1];
  next[5] = v_next[2];
  return next;
}

}  // namespace rsoc
