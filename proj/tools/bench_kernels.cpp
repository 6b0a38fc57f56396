// Micro-benchmark of the OpenMP sample kernels against their serial reference
// implementations, verifying bit-identical results while timing.

#include <chrono>
#include <cstdio>
#include <string>

#include "rsoc/models.hpp"
#include "rsoc/noise.hpp"
#include "rsoc/parallel.hpp"
#include "rsoc/smoothing.hpp"

using namespace rsoc;

namespace {

template <typename F>
double time_ms(int reps, F&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-28s serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx   %s\n", name,
              serial_ms, parallel_ms, serial_ms / parallel_ms,
              identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int threads = argc > 1 ? std::stoi(argv[1]) : 4;
  const int samples = argc > 2 ? std::stoi(argv[2]) : 256;
  const int reps = 50;
  std::printf("threads=%d samples=%d reps=%d\n\n", threads, samples, reps);

  Cartpole model;
  NoiseConfig nc;
  nc.eps = 0.5;
  nc.samples = samples;
  Vec x = (Vec(4) << 0.3, 2.0, -0.1, 0.4).finished();
  Vec u = (Vec(1) << 1.5).finished();
  SampleSet set = draw_sample_set(nc, 7, 3, model.control_dim());

  // Smoothed step.
  set_worker_threads(1);
  Vec step_s = smoothed_step_serial(model, x, u, set, nc.eps);
  double t_step_s = time_ms(reps, [&] { smoothed_step_serial(model, x, u, set, nc.eps); });
  set_worker_threads(threads);
  Vec step_p = smoothed_step(model, x, u, set, nc.eps);
  double t_step_p = time_ms(reps, [&] { smoothed_step(model, x, u, set, nc.eps); });
  report("smoothed step", t_step_s, t_step_p, (step_s.array() == step_p.array()).all());

  // First-order smoothed Jacobians.
  Mat fx_s, fu_s, fx_p, fu_p;
  set_worker_threads(1);
  smoothed_jacobians_first_order_serial(model, x, u, set, nc.eps, fx_s, fu_s);
  double t_jac_s = time_ms(reps, [&] {
    smoothed_jacobians_first_order_serial(model, x, u, set, nc.eps, fx_s, fu_s);
  });
  set_worker_threads(threads);
  smoothed_jacobians_first_order(model, x, u, set, nc.eps, fx_p, fu_p);
  double t_jac_p = time_ms(reps, [&] {
    smoothed_jacobians_first_order(model, x, u, set, nc.eps, fx_p, fu_p);
  });
  report("first-order Jacobians", t_jac_s, t_jac_p, (fx_s.array() == fx_p.array()).all() && (fu_s.array() == fu_p.array()).all());

  // Zero-th order Jacobian estimate.
  set_worker_threads(1);
  Mat fz_s = smoothed_jacobian_zeroth_order_serial(model, x, u, set, nc.eps);
  double t_z_s = time_ms(reps, [&] {
    smoothed_jacobian_zeroth_order_serial(model, x, u, set, nc.eps);
  });
  set_worker_threads(threads);
  Mat fz_p = smoothed_jacobian_zeroth_order(model, x, u, set, nc.eps);
  double t_z_p =
      time_ms(reps, [&] { smoothed_jacobian_zeroth_order(model, x, u, set, nc.eps); });
  report("zeroth-order Jacobian", t_z_s, t_z_p, (fz_s.array() == fz_p.array()).all());

  return 0;
}
