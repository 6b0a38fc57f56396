#pragma once

#include <stdexcept>

#include "rsoc/types.hpp"

namespace rsoc {

// One velocity-level contact problem: find impulses lambda so that
//   v_post = v_free + M^-1 * J^T * lambda
// satisfies, per contact, the normal complementarity
//   0 <= lambda_N  perp  c_N - c_ref_N >= 0,      c = J * v_post,
// and the friction cone |lambda_T| <= mu * lambda_N with maximum dissipation.
// Rows of J are grouped per contact, normal row first, then 0, 1 or 2
// tangential rows (rows_per_contact in {1,2,3}).
struct ContactProblem {
  Mat M;       // n_v x n_v, symmetric positive definite
  Vec v_free;  // n_v
  Mat J;       // m x n_v
  Vec c_ref;   // m (only normal entries are used)
  Vec mu;      // n_c, >= 0
  int rows_per_contact = 2;

  int rows() const { return static_cast<int>(J.rows()); }
  int contacts() const { return rows_per_contact > 0 ? rows() / rows_per_contact : 0; }
  void validate() const;
};

struct ContactImpulses {
  Vec lambda;  // m
  Vec v_post;  // n_v
};

class ContactSolverError : public std::runtime_error {
 public:
  ContactSolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// v_free = v + M^-1 * nonContactForces * dt, with the bias forces already
// folded into nonContactForces by the caller (explicit evaluation at the
// pre-step state).
Vec free_velocity(const Mat& M, const Vec& v, const Vec& non_contact_forces, double dt);

// Outward corrective velocity target for a penetrating contact; 0 when the
// bodies are separated. erp in [0,1] removes the overlap over 1/erp steps.
double baumgarte_reference(double penetration_depth, double dt, double erp);

// Natural-map residual of the complementarity/cone conditions at lambda
// (infinity norm over rows); 0 iff lambda solves the problem.
double contact_residual(const ContactProblem& problem, const Vec& lambda);

// Frictionless solve (cone radius forced to zero).
ContactImpulses solve_signorini(const ContactProblem& problem, int max_sweeps = 200,
                                double tol = 1e-10);

// Projected Gauss-Seidel over the Delassus operator G = J M^-1 J^T: normal
// update, then tangential update clamped to the cone, per contact per sweep.
// When the sweep budget runs out the solve still throws unless the remaining
// residual is within accept_residual (relative to the problem's velocity
// scale); nearly parallel contact rows or singular leg poses make the
// Delassus operator ill-conditioned and the asymptotic rate arbitrarily slow,
// so simulation callers pass a nonzero floor while accuracy tests keep 0.
ContactImpulses solve_ncp_pgs(const ContactProblem& problem, int max_sweeps = 200,
                              double tol = 1e-10, double accept_residual = 0.0);

}  // namespace rsoc
