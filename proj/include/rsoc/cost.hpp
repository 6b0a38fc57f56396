#pragma once

#include <functional>
#include <memory>

#include "rsoc/types.hpp"

namespace rsoc {

// Running cost term l(x, u). Derivatives default to central finite
// differences of value(); quadratic costs override with exact forms.
class StageCost {
 public:
  virtual ~StageCost() = default;
  virtual double value(const Vec& x, const Vec& u) const = 0;
  virtual void derivatives(const Vec& x, const Vec& u, Vec& lx, Vec& lu, Mat& lxx, Mat& lux,
                           Mat& luu) const;
};

class TerminalCost {
 public:
  virtual ~TerminalCost() = default;
  virtual double value(const Vec& x) const = 0;
  virtual void derivatives(const Vec& x, Vec& lx, Mat& lxx) const;
};

// Differentiable task-space map p(x) (tip position, body height, ...).
// Kinematic, smooth in x even for contact models.
class GoalMap {
 public:
  virtual ~GoalMap() = default;
  virtual int task_dim() const = 0;
  virtual int state_dim() const = 0;
  virtual Vec value(const Vec& x) const = 0;
  virtual Mat jacobian(const Vec& x) const;                  // FD fallback
  virtual Mat component_hessian(const Vec& x, int k) const;  // FD of jacobian
};

// Identity selection of a state slice: p(x) = x[offset : offset+dim].
class StateSliceMap final : public GoalMap {
 public:
  StateSliceMap(int state_dim, int offset, int dim);
  int task_dim() const override { return dim_; }
  int state_dim() const override { return state_dim_; }
  Vec value(const Vec& x) const override;
  Mat jacobian(const Vec& x) const override;
  Mat component_hessian(const Vec& x, int k) const override;

 private:
  int state_dim_, offset_, dim_;
};

// Arbitrary smooth map given as a function; derivatives by finite differences.
class FunctionMap final : public GoalMap {
 public:
  FunctionMap(int state_dim, int task_dim, std::function<Vec(const Vec&)> fn);
  int task_dim() const override { return task_dim_; }
  int state_dim() const override { return state_dim_; }
  Vec value(const Vec& x) const override { return fn_(x); }

 private:
  int state_dim_, task_dim_;
  std::function<Vec(const Vec&)> fn_;
};

// The cost structure shared by all benchmark tasks:
//   w_p*|p(x_N) - p*|^2
//   + sum_t ( w_u*|u_t|^2 + w_run*|p(x_t) - p*|^2 + w_v*|vel(x_t)|^2 ),
// where vel(x) is the second half of the state (all models are laid out as
// positions then velocities). The damping term keeps tasks with a free
// attitude from favouring last-instant ballistic bangs.
struct QuadraticGoalCost {
  std::shared_ptr<const GoalMap> map;
  Vec target;
  double w_p = 1.0;
  double w_u = 0.0;
  double w_run = 0.0;
  double w_v = 0.0;

  std::shared_ptr<StageCost> running() const;
  std::shared_ptr<TerminalCost> terminal() const;
  // |p(x) - target|_2, the task metric reported by the experiments.
  double goal_distance(const Vec& x) const;
};

// std::function-backed costs for tests and one-off experiments.
class FunctionStageCost final : public StageCost {
 public:
  explicit FunctionStageCost(std::function<double(const Vec&, const Vec&)> fn)
      : fn_(std::move(fn)) {}
  double value(const Vec& x, const Vec& u) const override { return fn_(x, u); }

 private:
  std::function<double(const Vec&, const Vec&)> fn_;
};

class FunctionTerminalCost final : public TerminalCost {
 public:
  explicit FunctionTerminalCost(std::function<double(const Vec&)> fn) : fn_(std::move(fn)) {}
  double value(const Vec& x) const override { return fn_(x); }

 private:
  std::function<double(const Vec&)> fn_;
};

}  // namespace rsoc
