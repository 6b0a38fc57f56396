#include <algorithm>
#include <cmath>

#include "rsoc/contact.hpp"
#include "rsoc/models.hpp"

namespace rsoc {

namespace {

// Point-mass positions: base (0, z), thigh tip, foot (shank tip). Rows of
// each Jacobian are (horizontal; vertical) w.r.t. q = (z, q_h, q_k).
struct Kinematics {
  Mat Jb, J1, J2;    // 2x3 point Jacobians
  Mat J1dot, J2dot;  // their time derivatives
  double foot_x, foot_z;
};

Kinematics kinematics(const HopperParams& p, const Vec& x) {
  const double z = x[0], qh = x[1], qk = x[2], vh = x[4], vk = x[5];
  const double sh = std::sin(qh), ch = std::cos(qh);
  const double shk = std::sin(qh + qk), chk = std::cos(qh + qk);
  Kinematics k;
  k.Jb = Mat::Zero(2, 3);
  k.Jb(1, 0) = 1.0;
  k.J1 = Mat::Zero(2, 3);
  k.J1(0, 1) = p.l1 * ch;
  k.J1(1, 0) = 1.0;
  k.J1(1, 1) = p.l1 * sh;
  k.J2 = Mat::Zero(2, 3);
  k.J2(0, 1) = p.l1 * ch + p.l2 * chk;
  k.J2(0, 2) = p.l2 * chk;
  k.J2(1, 0) = 1.0;
  k.J2(1, 1) = p.l1 * sh + p.l2 * shk;
  k.J2(1, 2) = p.l2 * shk;
  k.J1dot = Mat::Zero(2, 3);
  k.J1dot(0, 1) = -p.l1 * sh * vh;
  k.J1dot(1, 1) = p.l1 * ch * vh;
  k.J2dot = Mat::Zero(2, 3);
  const double whk = vh + vk;
  k.J2dot(0, 1) = -p.l1 * sh * vh - p.l2 * shk * whk;
  k.J2dot(0, 2) = -p.l2 * shk * whk;
  k.J2dot(1, 1) = p.l1 * ch * vh + p.l2 * chk * whk;
  k.J2dot(1, 2) = p.l2 * chk * whk;
  k.foot_x = p.l1 * sh + p.l2 * shk;
  k.foot_z = z - p.l1 * ch - p.l2 * chk;
  return k;
}

}  // namespace

Hopper::Hopper(const HopperParams& p) : DynamicsModel(6, 2, p.dt), p_(p) {}

double Hopper::foot_height(const Vec& x) const { return kinematics(p_, x).foot_z; }

Mat Hopper::mass_matrix(const Vec& x) const {
  const Kinematics k = kinematics(p_, x);
  return p_.base_mass * k.Jb.transpose() * k.Jb + p_.thigh_mass * k.J1.transpose() * k.J1 +
         p_.shank_mass * k.J2.transpose() * k.J2;
}

double Hopper::energy(const Vec& x) const {
  const Kinematics k = kinematics(p_, x);
  const Mat M = p_.base_mass * k.Jb.transpose() * k.Jb + p_.thigh_mass * k.J1.transpose() * k.J1 +
                p_.shank_mass * k.J2.transpose() * k.J2;
  const Vec v = x.tail(3);
  const double z = x[0];
  const double z1 = z - p_.l1 * std::cos(x[1]);
  const double kinetic = 0.5 * v.dot(M * v);
  const double potential =
      p_.gravity * (p_.base_mass * z + p_.thigh_mass * z1 + p_.shank_mass * k.foot_z);
  return kinetic + potential;
}

Vec Hopper::step_impl(const Vec& x, const Vec& u) const {
  const Kinematics k = kinematics(p_, x);
  const Vec v = x.tail(3);

  const Mat M = p_.base_mass * k.Jb.transpose() * k.Jb + p_.thigh_mass * k.J1.transpose() * k.J1 +
                p_.shank_mass * k.J2.transpose() * k.J2;
  const Vec coriolis = p_.thigh_mass * k.J1.transpose() * (k.J1dot * v) +
                       p_.shank_mass * k.J2.transpose() * (k.J2dot * v);
  Vec grav = Vec::Zero(3);
  grav += p_.gravity * (p_.base_mass * k.Jb.row(1) + p_.thigh_mass * k.J1.row(1) +
                        p_.shank_mass * k.J2.row(1))
                          .transpose();
  Vec tau(3);
  tau << 0.0, std::clamp(u[0], -p_.tau_max, p_.tau_max),
      std::clamp(u[1], -p_.tau_max, p_.tau_max);

  // Soft joint stops: push back past the limit, damp only motion further in.
  const auto stop = [&](double q, double dq, double lo, double hi) {
    if (q > hi) return -p_.stop_k * (q - hi) - p_.stop_d * std::max(dq, 0.0);
    if (q < lo) return -p_.stop_k * (q - lo) - p_.stop_d * std::min(dq, 0.0);
    return 0.0;
  };
  tau[1] += stop(x[1], v[1], -p_.hip_range, p_.hip_range);
  tau[2] += stop(x[2], v[2], -p_.knee_range, 0.0);

  Vec v_next = free_velocity(M, v, tau - coriolis - grav, dt());

  if (k.foot_z <= 0.0) {
    ContactProblem cp;
    cp.M = M;
    cp.v_free = v_next;
    cp.J.resize(2, 3);
    cp.J.row(0) = k.J2.row(1);  // normal: vertical foot velocity
    cp.J.row(1) = k.J2.row(0);  // tangential: horizontal foot velocity
    cp.c_ref.resize(2);
    cp.c_ref << baumgarte_reference(-k.foot_z, dt(), p_.erp), 0.0;
    cp.mu.resize(1);
    cp.mu << p_.mu;
    v_next = solve_ncp_pgs(cp, p_.contact_sweeps, p_.contact_tol, p_.contact_accept).v_post;
  }

  Vec next(6);
  next.head(3) = x.head(3) + dt() * v_next;
  next.tail(3) = v_next;
  return next;
}

}  // namespace rsoc
