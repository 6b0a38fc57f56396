#pragma once

#include "rsoc/model.hpp"
#include "rsoc/types.hpp"

namespace rsoc {

// All models integrate with one semi-implicit Euler step: velocities first,
// then positions with the new velocities. Angles are measured from the
// downward vertical, so (0, ..., 0) is the hanging/rest configuration.
// Joint dry friction follows a Coulomb law with an explicit stiction band:
// a joint inside the velocity band whose net non-friction torque is within
// the breakaway torque snaps to zero velocity; otherwise friction opposes
// motion (or the driving torque at the breakaway point) with fixed magnitude.

struct PendulumParams {
  double mass = 1.0;
  double length = 1.0;
  double gravity = 9.81;
  double dt = 5e-3;
  double coulomb = 0.0;  // breakaway torque; 0 disables friction entirely
  double v_stick = 1e-3;
};

// x = (theta, omega), u = (joint torque).
class Pendulum final : public DynamicsModel {
 public:
  explicit Pendulum(const PendulumParams& p = {});
  const PendulumParams& params() const { return p_; }
  // Analytic when frictionless; finite differences otherwise.
  void jacobians(const Vec& x, const Vec& u, Mat& fx, Mat& fu) const override;
  double energy(const Vec& x) const;
  Eigen::Vector2d tip_position(const Vec& x) const;  // (horizontal, height)

 protected:
  Vec step_impl(const Vec& x, const Vec& u) const override;

 private:
  PendulumParams p_;
};

struct CartpoleParams {
  double cart_mass = 1.0;
  double pole_mass = 1.0;
  double pole_length = 1.0;
  double gravity = 9.81;
  double dt = 0.02;
  double coulomb_cart = 0.1;  // breakaway force on the prismatic joint
  double coulomb_pole = 0.1;  // breakaway torque on the hinge
  double v_stick = 1e-3;
};

// x = (cart position, pole angle, cart velocity, pole rate), u = (cart force).
class Cartpole final : public DynamicsModel {
 public:
  explicit Cartpole(const CartpoleParams& p = {});
  const CartpoleParams& params() const { return p_; }
  double energy(const Vec& x) const;
  Eigen::Vector2d tip_position(const Vec& x) const;
  double fd_step() const override { return 1e-6; }

 protected:
  Vec step_impl(const Vec& x, const Vec& u) const override;

 private:
  CartpoleParams p_;
};

struct DoublePendulumParams {
  double m1 = 1.0, m2 = 1.0;
  double l1 = 1.0, l2 = 1.0;
  double gravity = 9.81;
  double dt = 0.01;
  double coulomb1 = 0.1, coulomb2 = 0.1;  // per-joint breakaway torques
  double v_stick = 1e-3;
};

// Point masses at the link tips, q2 relative to link 1.
// x = (q1, q2, v1, v2), u = (tau1, tau2).
class DoublePendulum final : public DynamicsModel {
 public:
  explicit DoublePendulum(const DoublePendulumParams& p = {});
  const DoublePendulumParams& params() const { return p_; }
  double energy(const Vec& x) const;
  Eigen::Vector2d tip_position(const Vec& x) const;
  Mat mass_matrix(const Vec& x) const;

 protected:
  Vec step_impl(const Vec& x, const Vec& u) const override;

 private:
  DoublePendulumParams p_;
};

struct CubeParams {
  double mass = 1.0;
  double gravity = 9.81;
  double mu = 0.9;
  double dt = 0.01;
  double erp = 0.2;
  int contact_sweeps = 6000;
  double contact_tol = 1e-12;
  double contact_accept = 1e-3;  // best-effort residual floor (see solve_ncp_pgs)
};

// Planar point cube on a table at height 0, directly actuated by a force.
// x = (px, pz, vx, vz), u = (fx, fz). Contact is active when pz <= 0.
class Cube final : public DynamicsModel {
 public:
  explicit Cube(const CubeParams& p = {});
  const CubeParams& params() const { return p_; }
  double fd_step() const override { return 1e-5; }

 protected:
  Vec step_impl(const Vec& x, const Vec& u) const override;

 private:
  CubeParams p_;
};

struct Quadrotor2dParams {
  double mass = 0.5;
  double inertia = 0.01;
  double arm = 0.2;              // rotor lever arm
  double skid_half_width = 0.25;
  double skid_drop = 0.1;        // skid contact points at (+-half_width, -drop)
  double thrust_max = 5.0;       // per-rotor saturation (thrust-to-weight ~2)
  double gravity = 9.81;
  double mu = 0.9;
  double dt = 0.02;
  double erp = 0.2;
  int contact_sweeps = 6000;
  double contact_tol = 1e-12;
  double contact_accept = 1e-3;  // best-effort residual floor (see solve_ncp_pgs)
};

// Planar quadrotor with two skid contact points; thrusts clamp to
// [0, thrust_max].
// x = (px, pz, th, vx, vz, om), u = (f1, f2).
class Quadrotor2d final : public DynamicsModel {
 public:
  explicit Quadrotor2d(const Quadrotor2dParams& p = {});
  const Quadrotor2dParams& params() const { return p_; }
  double fd_step() const override { return 1e-5; }
  // Height of the lower skid point; resting on the ground iff 0.
  double min_skid_height(const Vec& x) const;

 protected:
  Vec step_impl(const Vec& x, const Vec& u) const override;

 private:
  Quadrotor2dParams p_;
};

struct HopperParams {
  double base_mass = 1.0;
  double thigh_mass = 0.1;
  double shank_mass = 0.1;
  double l1 = 0.5, l2 = 0.5;
  double tau_max = 10.0;  // joint torque saturation
  // Soft joint stops: hip in [-hip_range, hip_range], knee in [-knee_range, 0]
  // (bends one way). Spring-damper torque beyond the limit; without stops,
  // torque noise folds the light leg through itself within a second.
  double hip_range = 1.2;
  double knee_range = 2.0;
  double stop_k = 60.0;
  double stop_d = 0.5;
  double gravity = 9.81;
  double mu = 0.9;
  double dt = 0.02;
  double erp = 0.2;
  int contact_sweeps = 6000;
  double contact_tol = 1e-12;
  double contact_accept = 1e-3;  // best-effort residual floor (see solve_ncp_pgs)
};

// Monopod on a vertical slider: base height z, hip angle q_h (from straight
// down), knee angle q_k (relative). Point masses at the base and both link
// tips; the foot is the shank tip and makes the single contact.
// x = (z, q_h, q_k, vz, v_h, v_k), u = (tau_h, tau_k).
class Hopper final : public DynamicsModel {
 public:
  explicit Hopper(const HopperParams& p = {});
  const HopperParams& params() const { return p_; }
  double fd_step() const override { return 1e-5; }
  double foot_height(const Vec& x) const;
  Mat mass_matrix(const Vec& x) const;
  double energy(const Vec& x) const;

 protected:
  Vec step_impl(const Vec& x, const Vec& u) const override;

 private:
  HopperParams p_;
};

}  // namespace rsoc
