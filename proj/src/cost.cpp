#include "rsoc/cost.hpp"

#include <cmath>
#include <stdexcept>

namespace rsoc {

namespace {

constexpr double kFdStep = 1e-5;

double col_step(double y) { return kFdStep * std::max(1.0, std::abs(y)); }

}  // namespace

void StageCost::derivatives(const Vec& x, const Vec& u, Vec& lx, Vec& lu, Mat& lxx, Mat& lux,
                            Mat& luu) const {
  const int nx = static_cast<int>(x.size());
  const int nu = static_cast<int>(u.size());
  lx.resize(nx);
  lu.resize(nu);
  lxx.resize(nx, nx);
  lux.resize(nu, nx);
  luu.resize(nu, nu);
  Vec xa = x, ua = u;
  const double c0 = value(x, u);
  auto at = [&](double) { return value(xa, ua); };
  for (int i = 0; i < nx; ++i) {
    const double h = col_step(x[i]);
    xa[i] = x[i] + h;
    const double cp = at(0);
    xa[i] = x[i] - h;
    const double cm = at(0);
    xa[i] = x[i];
    lx[i] = (cp - cm) / (2.0 * h);
    lxx(i, i) = (cp - 2.0 * c0 + cm) / (h * h);
  }
  for (int i = 0; i < nu; ++i) {
    const double h = col_step(u[i]);
    ua[i] = u[i] + h;
    const double cp = at(0);
    ua[i] = u[i] - h;
    const double cm = at(0);
    ua[i] = u[i];
    lu[i] = (cp - cm) / (2.0 * h);
    luu(i, i) = (cp - 2.0 * c0 + cm) / (h * h);
  }
  // Mixed second derivatives via the four-point stencil.
  for (int i = 0; i < nx; ++i) {
    for (int j = i + 1; j < nx; ++j) {
      const double hi = col_step(x[i]), hj = col_step(x[j]);
      xa[i] = x[i] + hi;
      xa[j] = x[j] + hj;
      const double cpp = at(0);
      xa[j] = x[j] - hj;
      const double cpm = at(0);
      xa[i] = x[i] - hi;
      const double cmm = at(0);
      xa[j] = x[j] + hj;
      const double cmp = at(0);
      xa[i] = x[i];
      xa[j] = x[j];
      lxx(i, j) = lxx(j, i) = (cpp - cpm - cmp + cmm) / (4.0 * hi * hj);
    }
  }
  for (int i = 0; i < nu; ++i) {
    for (int j = i + 1; j < nu; ++j) {
      const double hi = col_step(u[i]), hj = col_step(u[j]);
      ua[i] = u[i] + hi;
      ua[j] = u[j] + hj;
      const double cpp = at(0);
      ua[j] = u[j] - hj;
      const double cpm = at(0);
      ua[i] = u[i] - hi;
      const double cmm = at(0);
      ua[j] = u[j] + hj;
      const double cmp = at(0);
      ua[i] = u[i];
      ua[j] = u[j];
      luu(i, j) = luu(j, i) = (cpp - cpm - cmp + cmm) / (4.0 * hi * hj);
    }
  }
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nx; ++j) {
      const double hi = col_step(u[i]), hj = col_step(x[j]);
      ua[i] = u[i] + hi;
      xa[j] = x[j] + hj;
      const double cpp = at(0);
      xa[j] = x[j] - hj;
      const double cpm = at(0);
      ua[i] = u[i] - hi;
      const double cmm = at(0);
      xa[j] = x[j] + hj;
      const double cmp = at(0);
      ua[i] = u[i];
      xa[j] = x[j];
      lux(i, j) = (cpp - cpm - cmp + cmm) / (4.0 * hi * hj);
    }
  }
}

void TerminalCost::derivatives(const Vec& x, Vec& lx, Mat& lxx) const {
  const int nx = static_cast<int>(x.size());
  lx.resize(nx);
  lxx.resize(nx, nx);
  Vec xa = x;
  const double c0 = value(x);
  for (int i = 0; i < nx; ++i) {
    const double h = col_step(x[i]);
    xa[i] = x[i] + h;
    const double cp = value(xa);
    xa[i] = x[i] - h;
    const double cm = value(xa);
    xa[i] = x[i];
    lx[i] = (cp - cm) / (2.0 * h);
    lxx(i, i) = (cp - 2.0 * c0 + cm) / (h * h);
  }
  for (int i = 0; i < nx; ++i) {
    for (int j = i + 1; j < nx; ++j) {
      const double hi = col_step(x[i]), hj = col_step(x[j]);
      xa[i] = x[i] + hi;
      xa[j] = x[j] + hj;
      const double cpp = value(xa);
      xa[j] = x[j] - hj;
      const double cpm = value(xa);
      xa[i] = x[i] - hi;
      const double cmm = value(xa);
      xa[j] = x[j] + hj;
      const double cmp = value(xa);
      xa[i] = x[i];
      xa[j] = x[j];
      lxx(i, j) = lxx(j, i) = (cpp - cpm - cmp + cmm) / (4.0 * hi * hj);
    }
  }
}

Mat GoalMap::jacobian(const Vec& x) const {
  const int m = task_dim();
  const int n = static_cast<int>(x.size());
  Mat J(m, n);
  Vec xa = x;
  for (int j = 0; j < n; ++j) {
    const double h = col_step(x[j]);
    xa[j] = x[j] + h;
    const Vec p = value(xa);
    xa[j] = x[j] - h;
    const Vec q = value(xa);
    xa[j] = x[j];
    J.col(j) = (p - q) / (2.0 * h);
  }
  return J;
}

Mat GoalMap::component_hessian(const Vec& x, int k) const {
  const int n = static_cast<int>(x.size());
  Mat H(n, n);
  Vec xa = x;
  for (int j = 0; j < n; ++j) {
    const double h = col_step(x[j]);
    xa[j] = x[j] + h;
    const Vec jp = jacobian(xa).row(k).transpose();
    xa[j] = x[j] - h;
    const Vec jm = jacobian(xa).row(k).transpose();
    xa[j] = x[j];
    H.col(j) = (jp - jm) / (2.0 * h);
  }
  // Symmetrize away finite-difference asymmetry.
  return 0.5 * (H + H.transpose());
}

StateSliceMap::StateSliceMap(int state_dim, int offset, int dim)
    : state_dim_(state_dim), offset_(offset), dim_(dim) {
  if (offset < 0 || dim < 1 || offset + dim > state_dim) {
    throw std::invalid_argument("StateSliceMap: slice out of range");
  }
}

Vec StateSliceMap::value(const Vec& x) const { return x.segment(offset_, dim_); }

Mat StateSliceMap::jacobian(const Vec& x) const {
  Mat J = Mat::Zero(dim_, x.size());
  for (int i = 0; i < dim_; ++i) J(i, offset_ + i) = 1.0;
  return J;
}

Mat StateSliceMap::component_hessian(const Vec& x, int) const {
  return Mat::Zero(x.size(), x.size());
}

FunctionMap::FunctionMap(int state_dim, int task_dim, std::function<Vec(const Vec&)> fn)
    : state_dim_(state_dim), task_dim_(task_dim), fn_(std::move(fn)) {}

namespace {

class GoalRunningCost final : public StageCost {
 public:
  GoalRunningCost(QuadraticGoalCost cfg) : c_(std::move(cfg)) {}

  double value(const Vec& x, const Vec& u) const override {
    double v = c_.w_u * u.squaredNorm();
    if (c_.w_run > 0.0) {
      const Vec r = c_.map->value(x) - c_.target;
      v += c_.w_run * r.squaredNorm();
    }
    if (c_.w_v > 0.0) {
      const int nv = static_cast<int>(x.size()) / 2;
      v += c_.w_v * x.tail(nv).squaredNorm();
    }
    return v;
  }

  void derivatives(const Vec& x, const Vec& u, Vec& lx, Vec& lu, Mat& lxx, Mat& lux,
                   Mat& luu) const override {
    const int nx = static_cast<int>(x.size());
    const int nu = static_cast<int>(u.size());
    lu = 2.0 * c_.w_u * u;
    luu = 2.0 * c_.w_u * Mat::Identity(nu, nu);
    lux = Mat::Zero(nu, nx);
    if (c_.w_run > 0.0) {
      const Vec r = c_.map->value(x) - c_.target;
      const Mat J = c_.map->jacobian(x);
      lx = 2.0 * c_.w_run * J.transpose() * r;
      lxx = 2.0 * c_.w_run * J.transpose() * J;
      for (int k = 0; k < c_.map->task_dim(); ++k) {
        lxx += 2.0 * c_.w_run * r[k] * c_.map->component_hessian(x, k);
      }
    } else {
      lx = Vec::Zero(nx);
      lxx = Mat::Zero(nx, nx);
    }
    if (c_.w_v > 0.0) {
      const int nv = nx / 2;
      lx.tail(nv) += 2.0 * c_.w_v * x.tail(nv);
      lxx.bottomRightCorner(nv, nv) += 2.0 * c_.w_v * Mat::Identity(nv, nv);
    }
  }

 private:
  QuadraticGoalCost c_;
};

class GoalTerminalCost final : public TerminalCost {
 public:
  GoalTerminalCost(QuadraticGoalCost cfg) : c_(std::move(cfg)) {}

  double value(const Vec& x) const override {
    const Vec r = c_.map->value(x) - c_.target;
    return c_.w_p * r.squaredNorm();
  }

  void derivatives(const Vec& x, Vec& lx, Mat& lxx) const override {
    const Vec r = c_.map->value(x) - c_.target;
    const Mat J = c_.map->jacobian(x);
    lx = 2.0 * c_.w_p * J.transpose() * r;
    lxx = 2.0 * c_.w_p * J.transpose() * J;
    for (int k = 0; k < c_.map->task_dim(); ++k) {
      lxx += 2.0 * c_.w_p * r[k] * c_.map->component_hessian(x, k);
    }
  }

 private:
  QuadraticGoalCost c_;
};

}  // namespace

std::shared_ptr<StageCost> QuadraticGoalCost::running() const {
  if (!map) throw std::invalid_argument("QuadraticGoalCost: map is null");
  if (target.size() != map->task_dim()) {
    throw std::invalid_argument("QuadraticGoalCost: target size != task_dim");
  }
  return std::make_shared<GoalRunningCost>(*this);
}

std::shared_ptr<TerminalCost> QuadraticGoalCost::terminal() const {
  if (!map) throw std::invalid_argument("QuadraticGoalCost: map is null");
  if (target.size() != map->task_dim()) {
    throw std::invalid_argument("QuadraticGoalCost: target size != task_dim");
  }
  return std::make_shared<GoalTerminalCost>(*this);
}

double QuadraticGoalCost::goal_distance(const Vec& x) const {
  return (map->value(x) - target).norm();
}

}  // namespace rsoc
