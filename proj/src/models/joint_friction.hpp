#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace rsoc::detail {

// Coulomb + stiction torque for one joint. Returns the friction torque to
// add; a true `stick` means the caller should snap the joint velocity to 0.
inline double joint_friction(double v, double tau_nf, double coulomb, double v_stick,
                             bool& stick) {
  stick = false;
  if (coulomb <= 0.0) return 0.0;
  if (std::abs(v) < v_stick) {
    if (std::abs(tau_nf) <= coulomb) {
      stick = true;
      return 0.0;
    }
    return tau_nf > 0.0 ? -coulomb : coulomb;  // breakaway: oppose the drive
  }
  return v > 0.0 ? -coulomb : coulomb;
}

// Coupled stiction for an n-joint chain M*acc = tau_nf + fric. A joint inside
// the velocity band sticks only if the torque friction must supply to hold it
// (which includes the inertial coupling from the joints that do move) fits in
// the cone; testing each joint's own tau_nf alone would freeze a passive joint
// no matter how hard its neighbours shake it. Active-set loop, <= n passes.
// Returns acc with stick rows exactly zero; callers snap those velocities.
inline Eigen::VectorXd coupled_joint_friction(const Eigen::MatrixXd& M,
                                              const Eigen::VectorXd& tau_nf,
                                              const Eigen::VectorXd& coulomb,
                                              const Eigen::VectorXd& v, double v_stick,
                                              Eigen::Array<bool, Eigen::Dynamic, 1>& stick) {
  const int n = static_cast<int>(tau_nf.size());
  Eigen::VectorXd fric = Eigen::VectorXd::Zero(n);
  stick = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(n, false);
  for (int j = 0; j < n; ++j) {
    if (coulomb[j] <= 0.0) continue;
    if (std::abs(v[j]) < v_stick) {
      stick[j] = true;  // candidate; confirmed below
    } else {
      fric[j] = v[j] > 0.0 ? -coulomb[j] : coulomb[j];
    }
  }

  for (int pass = 0; pass <= n; ++pass) {
    // Solve with the current stick set frozen: rows/cols of sticking joints
    // are replaced by acc_j = 0.
    Eigen::MatrixXd A = M;
    Eigen::VectorXd b = tau_nf + fric;
    for (int j = 0; j < n; ++j) {
      if (!stick[j]) continue;
      A.row(j).setZero();
      A.col(j).setZero();
      A(j, j) = 1.0;
      b[j] = 0.0;
    }
    Eigen::VectorXd acc = A.ldlt().solve(b);

    // Holding torque each sticking joint needs: row of the full system with
    // its own acceleration pinned to zero.
    int worst = -1;
    double worst_excess = 0.0;
    for (int j = 0; j < n; ++j) {
      if (!stick[j]) continue;
      const double hold = M.row(j).dot(acc) - tau_nf[j];
      const double excess = std::abs(hold) - coulomb[j];
      if (excess > worst_excess) {
        worst_excess = excess;
        worst = j;
      }
    }
    if (worst < 0) {
      for (int j = 0; j < n; ++j)
        if (stick[j]) acc[j] = 0.0;
      return acc;
    }
    // Breakaway: the joint slips against the torque it failed to hold.
    const double hold = M.row(worst).dot(acc) - tau_nf[worst];
    stick[worst] = false;
    fric[worst] = hold > 0.0 ? coulomb[worst] : -coulomb[worst];
  }
  return M.ldlt().solve((tau_nf + fric).eval());  // unreachable
}

}  // namespace rsoc::detail
