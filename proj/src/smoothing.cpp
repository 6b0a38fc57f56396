#include "rsoc/smoothing.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rsoc/parallel.hpp"

namespace rsoc {

namespace {

void check_batch(const DynamicsModel& model, const Vec& u, const SampleSet& samples) {
  if (samples.size() < 1) throw std::invalid_argument("smoothing: empty sample set");
  for (const Vec& z : samples.z) {
    if (z.size() != u.size() || u.size() != model.control_dim()) {
      throw std::invalid_argument("smoothing: sample/control dimension mismatch");
    }
  }
}

Vec smoothed_step_impl(const DynamicsModel& model, const Vec& x, const Vec& u,
                       const SampleSet& samples, double eps, bool allow_parallel) {
  if (eps == 0.0) return model.step(x, u);
  check_batch(model, u, samples);
  const int M = samples.size();
  VecList slot(static_cast<std::size_t>(M));
  parallel_for_indexed(
      M,
      [&](int i) {
        try {
          slot[static_cast<std::size_t>(i)] =
              model.step(x, u + eps * samples.z[static_cast<std::size_t>(i)]);
        } catch (const std::exception& e) {
          throw std::runtime_error("smoothed_step: sample " + std::to_string(i) + ": " + e.what());
        }
      },
      allow_parallel);
  Vec acc = Vec::Zero(model.state_dim());
  for (int i = 0; i < M; ++i) acc += slot[static_cast<std::size_t>(i)];
  return acc / static_cast<double>(M);
}

void smoothed_jac_first_impl(const DynamicsModel& model, const Vec& x, const Vec& u,
                             const SampleSet& samples, double eps, Mat& fx, Mat& fu,
                             bool allow_parallel) {
  if (eps == 0.0) {
    model.jacobians(x, u, fx, fu);
    return;
  }
  check_batch(model, u, samples);
  const int M = samples.size();
  MatList sfx(static_cast<std::size_t>(M)), sfu(static_cast<std::size_t>(M));
  parallel_for_indexed(
      M,
      [&](int i) {
        try {
          model.jacobians(x, u + eps * samples.z[static_cast<std::size_t>(i)],
                          sfx[static_cast<std::size_t>(i)], sfu[static_cast<std::size_t>(i)]);
        } catch (const std::exception& e) {
          throw std::runtime_error("smoothed_jacobians: sample " + std::to_string(i) + ": " +
                                   e.what());
        }
      },
      allow_parallel);
  fx = Mat::Zero(model.state_dim(), model.state_dim());
  fu = Mat::Zero(model.state_dim(), model.control_dim());
  for (int i = 0; i < M; ++i) {
    fx += sfx[static_cast<std::size_t>(i)];
    fu += sfu[static_cast<std::size_t>(i)];
  }
  fx /= static_cast<double>(M);
  fu /= static_cast<double>(M);
}

Mat smoothed_jac_zeroth_impl(const DynamicsModel& model, const Vec& x, const Vec& u,
                             const SampleSet& samples, double eps, bool allow_parallel) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("smoothed_jacobian_zeroth_order: eps must be > 0");
  }
  check_batch(model, u, samples);
  const int M = samples.size();
  const Vec base = model.step(x, u);
  MatList slot(static_cast<std::size_t>(M));
  parallel_for_indexed(
      M,
      [&](int i) {
        try {
          const Vec& z = samples.z[static_cast<std::size_t>(i)];
          slot[static_cast<std::size_t>(i)] = (model.step(x, u + eps * z) - base) * z.transpose();
        } catch (const std::exception& e) {
          throw std::runtime_error("smoothed_jacobian_zeroth_order: sample " + std::to_string(i) +
                                   ": " + e.what());
        }
      },
      allow_parallel);
  Mat acc = Mat::Zero(model.state_dim(), model.control_dim());
  for (int i = 0; i < M; ++i) acc += slot[static_cast<std::size_t>(i)];
  return acc / (static_cast<double>(M) * eps);
}

}  // namespace

Vec smoothed_step(const DynamicsModel& model, const Vec& x, const Vec& u, const SampleSet& samples,
                  double eps) {
  return smoothed_step_impl(model, x, u, samples, eps, true);
}

Vec smoothed_step_serial(const DynamicsModel& model, const Vec& x, const Vec& u,
                         const SampleSet& samples, double eps) {
  return smoothed_step_impl(model, x, u, samples, eps, false);
}

void smoothed_jacobians_first_order(const DynamicsModel& model, const Vec& x, const Vec& u,
                                    const SampleSet& samples, double eps, Mat& fx, Mat& fu) {
  smoothed_jac_first_impl(model, x, u, samples, eps, fx, fu, true);
}

void smoothed_jacobians_first_order_serial(const DynamicsModel& model, const Vec& x, const Vec& u,
                                           const SampleSet& samples, double eps, Mat& fx, Mat& fu) {
  smoothed_jac_first_impl(model, x, u, samples, eps, fx, fu, false);
}

Mat smoothed_jacobian_zeroth_order(const DynamicsModel& model, const Vec& x, const Vec& u,
                                   const SampleSet& samples, double eps) {
  return smoothed_jac_zeroth_impl(model, x, u, samples, eps, true);
}

Mat smoothed_jacobian_zeroth_order_serial(const DynamicsModel& model, const Vec& x, const Vec& u,
                                          const SampleSet& samples, double eps) {
  return smoothed_jac_zeroth_impl(model, x, u, samples, eps, false);
}

Mat smoothed_fx_finite_diff(const DynamicsModel& model, const Vec& x, const Vec& u,
                            const SampleSet& samples, double eps, double h) {
  const int nx = model.state_dim();
  Mat fx(nx, nx);
  Vec xp = x, xm = x;
  for (int j = 0; j < nx; ++j) {
    const double hj = h * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + hj;
    xm[j] = x[j] - hj;
    fx.col(j) =
        (smoothed_step(model, xp, u, samples, eps) - smoothed_step(model, xm, u, samples, eps)) /
        (2.0 * hj);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return fx;
}

}  // namespace rsoc
