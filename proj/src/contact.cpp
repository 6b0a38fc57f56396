#include "rsoc/contact.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rsoc {

namespace {

// Diagonal entries below this are treated as unconstrained rows (zero
// Jacobian row -> the impulse cannot affect its own velocity).
constexpr double kDiagFloor = 1e-14;

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

struct Delassus {
  Mat G;         // m x m
  Vec b;         // J * v_free
  Mat minv_jt;   // n_v x m, M^-1 J^T
};

Delassus build_delassus(const ContactProblem& p) {
  Eigen::LLT<Mat> llt(p.M);
  if (llt.info() != Eigen::Success) {
    throw ContactSolverError("contact solve: mass matrix not positive definite", 0.0);
  }
  Delassus d;
  d.minv_jt = llt.solve(p.J.transpose());
  d.G = p.J * d.minv_jt;
  d.b = p.J * p.v_free;
  return d;
}

double residual_at(const ContactProblem& p, const Mat& G, const Vec& b, const Vec& lambda,
                   bool frictionless) {
  const Vec c = G * lambda + b;
  const int rpc = p.rows_per_contact;
  double r = 0.0;
  for (int k = 0; k < p.contacts(); ++k) {
    const int iN = k * rpc;
    const double lam_n = lambda[iN];
    r = std::max(r, std::abs(lam_n - std::max(0.0, lam_n - (c[iN] - p.c_ref[iN]))));
    const double radius = frictionless ? 0.0 : p.mu[k] * lam_n;
    if (rpc == 2) {
      const int iT = iN + 1;
      r = std::max(r, std::abs(lambda[iT] - clamp(lambda[iT] - c[iT], -radius, radius)));
    } else if (rpc == 3) {
      const Eigen::Vector2d lt(lambda[iN + 1], lambda[iN + 2]);
      Eigen::Vector2d target = lt - Eigen::Vector2d(c[iN + 1], c[iN + 2]);
      const double n = target.norm();
      if (n > radius) target *= (n > 0.0 ? radius / n : 0.0);
      r = std::max(r, (lt - target).lpNorm<Eigen::Infinity>());
    }
  }
  return r;
}

ContactImpulses pgs(const ContactProblem& p, int max_sweeps, double tol, bool frictionless,
                    double accept_residual) {
  p.validate();
  const Delassus d = build_delassus(p);
  const int rpc = p.rows_per_contact;
  const int nc = p.contacts();
  Vec lambda = Vec::Zero(p.rows());
  double res = residual_at(p, d.G, d.b, lambda, frictionless);
  for (int sweep = 0; sweep < max_sweeps && res > tol; ++sweep) {
    for (int k = 0; k < nc; ++k) {
      const int iN = k * rpc;
      // Planar contact pair: solve the 2x2 cone problem for this contact
      // exactly (separating / sticking / sliding case split), holding the
      // other contacts fixed. The scalar normal-then-tangent update below
      // diverges for sliding contacts whenever mu*|G_nt| > G_nn, which
      // oblique leg poses reach routinely.
      if (rpc == 2 && d.G(iN, iN) > kDiagFloor && d.G(iN + 1, iN + 1) > kDiagFloor) {
        const int iT = iN + 1;
        const double A00 = d.G(iN, iN), A01 = d.G(iN, iT);
        const double A10 = d.G(iT, iN), A11 = d.G(iT, iT);
        const double mu_k = frictionless ? 0.0 : p.mu[k];
        // contact-frame velocities with this contact's own impulse removed
        const double cn0 = d.G.row(iN).dot(lambda) + d.b[iN] - p.c_ref[iN] -
                           A00 * lambda[iN] - A01 * lambda[iT];
        const double ct0 =
            d.G.row(iT).dot(lambda) + d.b[iT] - A10 * lambda[iN] - A11 * lambda[iT];
        double ln = -1.0, lt = 0.0;
        if (cn0 >= 0.0) {
          ln = 0.0;  // separating
        } else {
          const double det = A00 * A11 - A01 * A10;
          if (det > 0.0) {  // sticking: zero out both velocity rows
            const double sn = (-A11 * cn0 + A01 * ct0) / det;
            const double st = (A10 * cn0 - A00 * ct0) / det;
            if (sn >= 0.0 && std::abs(st) <= mu_k * sn) {
              ln = sn;
              lt = st;
            }
          }
          if (ln < 0.0) {  // sliding: impulse on the cone edge, opposing slip
            for (const double s : {1.0, -1.0}) {
              const double den = A00 + s * mu_k * A01;
              if (den <= kDiagFloor) continue;
              const double sn = -cn0 / den;
              if (sn < 0.0) continue;
              const double vt = (A10 + s * mu_k * A11) * sn + ct0;
              if (s * vt <= 0.0) {
                ln = sn;
                lt = s * mu_k * sn;
                break;
              }
            }
          }
        }
        if (ln >= 0.0) {
          lambda[iN] = ln;
          lambda[iT] = lt;
          continue;
        }
        // No case admissible (degenerate block): scalar relaxation below.
      }
      if (d.G(iN, iN) > kDiagFloor) {
        const double cn = d.G.row(iN).dot(lambda) + d.b[iN];
        lambda[iN] = std::max(0.0, lambda[iN] - (cn - p.c_ref[iN]) / d.G(iN, iN));
      }
      const double radius = frictionless ? 0.0 : p.mu[k] * lambda[iN];
      if (rpc == 2) {
        const int iT = iN + 1;
        if (d.G(iT, iT) > kDiagFloor) {
          const double ct = d.G.row(iT).dot(lambda) + d.b[iT];
          lambda[iT] -= ct / d.G(iT, iT);
        }
        lambda[iT] = clamp(lambda[iT], -radius, radius);
      } else if (rpc == 3) {
        for (int j = 1; j <= 2; ++j) {
          const int iT = iN + j;
          if (d.G(iT, iT) > kDiagFloor) {
            const double ct = d.G.row(iT).dot(lambda) + d.b[iT];
            lambda[iT] -= ct / d.G(iT, iT);
          }
        }
        Eigen::Vector2d lt(lambda[iN + 1], lambda[iN + 2]);
        const double n = lt.norm();
        if (n > radius) {
          lt *= (n > 0.0 ? radius / n : 0.0);
          lambda[iN + 1] = lt[0];
          lambda[iN + 2] = lt[1];
        }
      }
    }
    res = residual_at(p, d.G, d.b, lambda, frictionless);
  }
  if (res > tol) {
    const double scale =
        std::max({1.0, d.b.lpNorm<Eigen::Infinity>(), p.c_ref.lpNorm<Eigen::Infinity>()});
    if (res > accept_residual * scale) {
      throw ContactSolverError(
          "contact solve: PGS did not converge, residual " + std::to_string(res), res);
    }
  }
  ContactImpulses out;
  out.lambda = std::move(lambda);
  out.v_post = p.v_free + d.minv_jt * out.lambda;
  return out;
}

}  // namespace

void ContactProblem::validate() const {
  const int nv = static_cast<int>(M.rows());
  if (M.cols() != nv || nv < 1) throw std::invalid_argument("ContactProblem: M must be square");
  if ((M - M.transpose()).lpNorm<Eigen::Infinity>() > 1e-9 * std::max(1.0, M.norm())) {
    throw std::invalid_argument("ContactProblem: M must be symmetric");
  }
  if (v_free.size() != nv) throw std::invalid_argument("ContactProblem: v_free size mismatch");
  if (rows_per_contact < 1 || rows_per_contact > 3) {
    throw std::invalid_argument("ContactProblem: rows_per_contact must be 1, 2 or 3");
  }
  if (J.cols() != nv || J.rows() % rows_per_contact != 0 || J.rows() < 1) {
    throw std::invalid_argument("ContactProblem: contact Jacobian shape mismatch");
  }
  if (c_ref.size() != J.rows()) throw std::invalid_argument("ContactProblem: c_ref size mismatch");
  if (mu.size() != contacts()) throw std::invalid_argument("ContactProblem: mu size mismatch");
  if ((mu.array() < 0.0).any()) throw std::invalid_argument("ContactProblem: mu must be >= 0");
}

Vec free_velocity(const Mat& M, const Vec& v, const Vec& non_contact_forces, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("free_velocity: dt must be positive");
  if (M.rows() != M.cols() || v.size() != M.rows() || non_contact_forces.size() != M.rows()) {
    throw std::invalid_argument("free_velocity: dimension mismatch");
  }
  Eigen::LLT<Mat> llt(M);
  if (llt.info() != Eigen::Success) {
    throw ContactSolverError("free_velocity: mass matrix not positive definite", 0.0);
  }
  return v + llt.solve(non_contact_forces) * dt;
}

double baumgarte_reference(double penetration_depth, double dt, double erp) {
  if (erp < 0.0 || erp > 1.0) throw std::invalid_argument("baumgarte_reference: erp out of [0,1]");
  if (!(dt > 0.0)) throw std::invalid_argument("baumgarte_reference: dt must be positive");
  return penetration_depth > 0.0 ? erp * penetration_depth / dt : 0.0;
}

double contact_residual(const ContactProblem& problem, const Vec& lambda) {
  problem.validate();
  if (lambda.size() != problem.rows()) {
    throw std::invalid_argument("contact_residual: lambda size mismatch");
  }
  const Delassus d = build_delassus(problem);
  return residual_at(problem, d.G, d.b, lambda, false);
}

ContactImpulses solve_signorini(const ContactProblem& problem, int max_sweeps, double tol) {
  return pgs(problem, max_sweeps, tol, true, 0.0);
}

ContactImpulses solve_ncp_pgs(const ContactProblem& problem, int max_sweeps, double tol,
                              double accept_residual) {
  return pgs(problem, max_sweeps, tol, false, accept_residual);
}

}  // namespace rsoc
