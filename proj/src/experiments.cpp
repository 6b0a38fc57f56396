#include "rsoc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rsoc/csvio.hpp"
#include "rsoc/models.hpp"
#include "rsoc/parallel.hpp"
#include "rsoc/stats.hpp"
#include "rsoc/svgplot.hpp"
#include "rsoc/zeroth_order.hpp"

namespace rsoc {

namespace {

// ---------------------------------------------------------------------------
// Registry defaults. Each descriptor lists every key its run consumes so that
// config.resolved is complete and re-runnable as-is.

void common_sections(Config& c, int horizon, double dt, int samples, double eps0,
                     double alpha0, int max_iterations) {
  c.set("experiment.solver", "rddp");
  c.set_u64("experiment.seed", 0);
  c.set_int("experiment.threads", 1);
  c.set_bool("experiment.timing", false);

  c.set_int("model.horizon", horizon);
  c.set_double("model.dt", dt);

  c.set("noise.distribution", "gaussian");
  c.set_int("noise.samples", samples);

  c.set_double("schedule.eps0", eps0);
  c.set_double("schedule.alpha0", alpha0);
  c.set_double("schedule.eps_target", -1.0);   // -1 resolves to eps0/16
  c.set_double("schedule.alpha_target", -1.0); // -1 resolves to alpha0/16
  c.set_double("schedule.rho", 2.0);
  c.set_double("schedule.gamma", 2.0);
  c.set_int("schedule.stall_budget", 50);
  c.set_int("schedule.max_stages", 64);

  c.set_int("solver.max_iterations", max_iterations);
  c.set_double("solver.tolerance", 0.0);  // 0 = run the budget (stall demos)
  c.set_double("solver.reg_init", 1e-9);
  c.set_double("solver.reg_min", 1e-9);
  c.set_double("solver.reg_max", 1e6);
  c.set_double("solver.reg_increase", 10.0);
  c.set_double("solver.reg_decrease", 0.5);
  c.set_int("solver.ls_steps", 11);
  c.set_double("solver.acceptance_ratio", 1e-4);
  c.set_int("solver.track_handoff", 0);

  c.set_double("zeroth.eps", eps0);
  c.set_int("zeroth.samples", 32);
  c.set_double("zeroth.step_size", 1e-3);
  c.set_int("zeroth.max_iterations", 500);
}

void pendulum_model(Config& c, double coulomb) {
  PendulumParams p;
  c.set("model.type", "pendulum");
  c.set_double("model.mass", p.mass);
  c.set_double("model.length", p.length);
  c.set_double("model.gravity", p.gravity);
  c.set_double("model.coulomb", coulomb);
  c.set_double("model.v_stick", p.v_stick);
  c.set_vec("model.x0", Vec::Zero(2));
}

Config pendulum_swingup_defaults() {
  Config c;
  c.set("experiment.name", "pendulum-swingup");
  // alpha0 sits below the smoothed-gradient floor at the hanging stall point
  // (qu_w ~ 1e-3 there); anything looser ends every stage before it moves.
  common_sections(c, 400, 5e-3, 4, 1.0, 1e-4, 40);
  pendulum_model(c, 0.0);
  c.set_double("cost.w_p", 2.0);
  c.set_double("cost.w_u", 2e-5);
  c.set_double("cost.w_run", 0.0);
  c.set_double("cost.w_v", 0.0);
  c.set_vec("cost.target", (Vec(2) << 0.0, 1.0).finished());
  c.set("success.metric", "goal_distance");
  c.set_double("success.threshold", 0.1);
  return c;
}

Config pendulum_friction_defaults() {
  Config c = pendulum_swingup_defaults();
  c.set("experiment.name", "pendulum-friction");
  // The noise scale must dominate the per-step friction drain or the hanging
  // state becomes a true local minimum of the smoothed problem.
  c.set_double("model.coulomb", 0.1);
  c.set_double("schedule.eps0", 2.0);
  c.set_double("zeroth.eps", 2.0);
  c.set_int("noise.samples", 8);
  c.set_int("solver.max_iterations", 60);
  return c;
}

Config double_pendulum_defaults() {
  Config c;
  c.set("experiment.name", "double-pendulum");
  common_sections(c, 150, 0.01, 8, 2.0, 1e-4, 100);
  DoublePendulumParams p;
  c.set("model.type", "double-pendulum");
  c.set_double("model.m1", p.m1);
  c.set_double("model.m2", p.m2);
  c.set_double("model.l1", p.l1);
  c.set_double("model.l2", p.l2);
  c.set_double("model.gravity", p.gravity);
  // Past ~0.3 the per-step Coulomb drain beats the smoothing wander and the
  // hanging rest pose becomes a true minimum of the smoothed problem too.
  c.set_double("model.coulomb1", 0.2);
  c.set_double("model.coulomb2", 0.2);
  c.set_double("model.v_stick", p.v_stick);
  c.set_vec("model.x0", Vec::Zero(4));
  c.set_double("cost.w_p", 2.0);
  c.set_double("cost.w_u", 2e-5);
  c.set_double("cost.w_run", 0.0);
  c.set_double("cost.w_v", 0.0);
  c.set_vec("cost.target", (Vec(2) << 0.0, 2.0).finished());
  c.set("success.metric", "goal_distance");
  c.set_double("success.threshold", 0.2);
  return c;
}

Config cartpole_friction_defaults() {
  Config c;
  c.set("experiment.name", "cartpole-friction");
  // The pole is only reachable through the cart coupling, so escape needs
  // noise kicks well above the combined breakaway scale; eps0=3 is robust
  // across sample counts where eps0<=2 is seed-sensitive.
  common_sections(c, 150, 0.02, 8, 3.0, 1e-4, 300);
  c.set_int("schedule.stall_budget", 40);
  CartpoleParams p;
  c.set("model.type", "cartpole");
  c.set_double("model.cart_mass", p.cart_mass);
  c.set_double("model.pole_mass", p.pole_mass);
  c.set_double("model.pole_length", p.pole_length);
  c.set_double("model.gravity", p.gravity);
  c.set_double("model.coulomb_cart", p.coulomb_cart);
  c.set_double("model.coulomb_pole", p.coulomb_pole);
  c.set_double("model.v_stick", p.v_stick);
  c.set_vec("model.x0", Vec::Zero(4));
  c.set_double("cost.w_p", 2.0);
  c.set_double("cost.w_u", 2e-5);
  c.set_double("cost.w_run", 0.0);
  c.set_double("cost.w_v", 0.0);
  c.set_vec("cost.target", (Vec(2) << 0.0, 1.0).finished());
  c.set("success.metric", "final_cost");
  c.set_double("success.threshold", 0.5);
  return c;
}

void cube_model(Config& c) {
  CubeParams p;
  c.set("model.type", "cube");
  c.set_double("model.mass", 0.1);
  c.set_double("model.gravity", p.gravity);
  c.set_double("model.mu", p.mu);
  c.set_double("model.erp", p.erp);
  c.set_int("model.contact_sweeps", p.contact_sweeps);
  c.set_double("model.contact_tol", p.contact_tol);
  c.set_double("model.contact_accept", p.contact_accept);
  c.set_vec("model.x0", Vec::Zero(4));
}

Config cube_lift_defaults() {
  Config c;
  c.set("experiment.name", "cube-lift");
  common_sections(c, 60, 0.01, 8, 1.0, 1e-4, 100);
  cube_model(c);
  c.set_double("cost.w_p", 2.0);
  c.set_double("cost.w_u", 2e-5);
  c.set_double("cost.w_run", 0.0);
  c.set_double("cost.w_v", 0.0);
  c.set_vec("cost.target", (Vec(2) << 0.0, 0.5).finished());
  c.set("success.metric", "goal_distance");
  c.set_double("success.threshold", 0.1);
  return c;
}

Config cube_slide_defaults() {
  Config c = cube_lift_defaults();
  c.set("experiment.name", "cube-slide");
  c.set_int("model.horizon", 80);
  c.set_vec("cost.target", (Vec(2) << 0.5, 0.0).finished());
  // Breaking tangential stiction needs far less exploration than breaking
  // contact; large noise here just leaves residual wander in the final push.
  c.set_double("schedule.eps0", 0.5);
  return c;
}

Config quadrotor_defaults() {
  Config c;
  c.set("experiment.name", "quadrotor-takeoff-2d");
  common_sections(c, 100, 0.02, 8, 4.0, 1e-4, 300);
  // Hover is open-loop unstable: replaying a stage's controls under a fresh
  // noise epoch tips the body over long before the horizon, so stage handoffs
  // must track the previous reference with its gains. Gentler noise shrink
  // (sqrt(2) per stage) gives the attitude loop more stages to consolidate.
  c.set_int("solver.track_handoff", 1);
  c.set_double("schedule.rho", std::sqrt(2.0));
  Quadrotor2dParams p;
  c.set("model.type", "quadrotor2d");
  c.set_double("model.mass", p.mass);
  c.set_double("model.inertia", p.inertia);
  c.set_double("model.arm", p.arm);
  c.set_double("model.skid_half_width", p.skid_half_width);
  c.set_double("model.skid_drop", p.skid_drop);
  c.set_double("model.thrust_max", p.thrust_max);
  c.set_double("model.gravity", p.gravity);
  c.set_double("model.mu", p.mu);
  c.set_double("model.erp", p.erp);
  c.set_int("model.contact_sweeps", p.contact_sweeps);
  c.set_double("model.contact_tol", p.contact_tol);
  c.set_double("model.contact_accept", p.contact_accept);
  // Resting on the skids: contact points at height 0.
  c.set_vec("model.x0", (Vec(6) << 0.0, p.skid_drop, 0.0, 0.0, 0.0, 0.0).finished());
  c.set_double("cost.w_p", 4.0);
  c.set_double("cost.w_u", 1e-4);
  c.set_double("cost.w_run", 0.0);
  c.set_double("cost.w_v", 0.0);
  c.set_vec("cost.target", (Vec(2) << 0.0, p.skid_drop + 1.0).finished());
  c.set("success.metric", "goal_distance");
  c.set_double("success.threshold", 0.15);
  return c;
}

Config hopper_defaults() {
  Config c;
  c.set("experiment.name", "hopper-jump-2d");
  common_sections(c, 80, 0.02, 8, 3.0, 1e-4, 150);
  HopperParams p;
  c.set("model.type", "hopper");
  c.set_double("model.base_mass", p.base_mass);
  c.set_double("model.thigh_mass", p.thigh_mass);
  c.set_double("model.shank_mass", p.shank_mass);
  c.set_double("model.l1", p.l1);
  c.set_double("model.l2", p.l2);
  c.set_double("model.tau_max", p.tau_max);
  c.set_double("model.hip_range", p.hip_range);
  c.set_double("model.knee_range", p.knee_range);
  c.set_double("model.stop_k", p.stop_k);
  c.set_double("model.stop_d", p.stop_d);
  c.set_double("model.gravity", p.gravity);
  c.set_double("model.mu", p.mu);
  c.set_double("model.erp", p.erp);
  c.set_int("model.contact_sweeps", p.contact_sweeps);
  c.set_double("model.contact_tol", p.contact_tol);
  c.set_double("model.contact_accept", p.contact_accept);
  // Stretched: leg straight down, foot on the ground.
  c.set_vec("model.x0", (Vec(6) << p.l1 + p.l2, 0.0, 0.0, 0.0, 0.0, 0.0).finished());
  c.set_double("cost.w_p", 4.0);
  c.set_double("cost.w_u", 1e-3);
  c.set_double("cost.w_run", 0.0);
  c.set_double("cost.w_v", 0.0);
  c.set_vec("cost.target", (Vec(1) << p.l1 + p.l2 + 0.3).finished());
  c.set("success.metric", "apex_distance");
  c.set_double("success.threshold", 0.1);
  return c;
}

Config sample_sweep_defaults() {
  Config c = cartpole_friction_defaults();
  c.set("experiment.name", "sample-sweep");
  c.set("sweep.samples", "1 2 4 8 16 32 64");
  c.set("success.metric", "sweep_improvement");
  // Relative final-cost improvement of the largest over the M=8 run; small
  // means extra samples buy little.
  c.set_double("success.threshold", 0.2);
  return c;
}

Config schedule_compare_defaults() {
  Config c = cube_lift_defaults();
  c.set("experiment.name", "schedule-compare");
  c.set("success.metric", "schedule_ordering");
  // Final |Qu|_inf ratio adaptive/fixed; < 1 with both noisy runs beating the
  // plain solver on raw final cost.
  c.set_double("success.threshold", 1.0);
  return c;
}

std::vector<ExperimentDescriptor> make_registry() {
  return {
      {"pendulum-swingup", "swing a frictionless pendulum upright past the hanging extremum",
       pendulum_swingup_defaults()},
      {"pendulum-friction", "pendulum swing-up against joint dry friction",
       pendulum_friction_defaults()},
      {"double-pendulum", "two-link swing-up with dry friction on both joints",
       double_pendulum_defaults()},
      {"cartpole-friction", "cartpole swing-up with dry friction on cart and hinge",
       cartpole_friction_defaults()},
      {"cube-lift", "lift a grounded cube to a target height (contact breaking)",
       cube_lift_defaults()},
      {"cube-slide", "slide a grounded cube sideways against Coulomb friction",
       cube_slide_defaults()},
      {"quadrotor-takeoff-2d", "planar quadrotor takeoff from resting skids to +1 m",
       quadrotor_defaults()},
      {"hopper-jump-2d", "monopod jump from a stretched leg to +0.3 m apex",
       hopper_defaults()},
      {"sample-sweep", "cartpole-friction across sample counts M in {1..64}",
       sample_sweep_defaults()},
      {"schedule-compare", "cube-lift under plain, fixed-noise and adaptive solvers",
       schedule_compare_defaults()},
  };
}

// ---------------------------------------------------------------------------

std::string registry_names() {
  std::string names;
  for (const auto& d : experiment_registry()) {
    if (!names.empty()) names += ", ";
    names += d.name;
  }
  return names;
}

AdaptiveSchedule schedule_from(const Config& c) {
  AdaptiveSchedule s;
  s.eps0 = c.get_double("schedule.eps0", s.eps0);
  s.alpha0 = c.get_double("schedule.alpha0", s.alpha0);
  s.eps_target = c.get_double("schedule.eps_target", s.eps_target);
  s.alpha_target = c.get_double("schedule.alpha_target", s.alpha_target);
  s.rho = c.get_double("schedule.rho", s.rho);
  s.gamma = c.get_double("schedule.gamma", s.gamma);
  s.stall_budget = c.get_int("schedule.stall_budget", s.stall_budget);
  s.max_stages = c.get_int("schedule.max_stages", s.max_stages);
  return s;
}

SolverSettings solver_from(const Config& c) {
  SolverSettings s;
  s.max_iterations = c.get_int("solver.max_iterations", s.max_iterations);
  s.tolerance = c.get_double("solver.tolerance", 0.0);
  s.reg_init = c.get_double("solver.reg_init", s.reg_init);
  s.reg_min = c.get_double("solver.reg_min", s.reg_min);
  s.reg_max = c.get_double("solver.reg_max", s.reg_max);
  s.reg_increase = c.get_double("solver.reg_increase", s.reg_increase);
  s.reg_decrease = c.get_double("solver.reg_decrease", s.reg_decrease);
  s.ls_steps = c.get_int("solver.ls_steps", s.ls_steps);
  s.acceptance_ratio = c.get_double("solver.acceptance_ratio", s.acceptance_ratio);
  s.track_handoff = c.get_int("solver.track_handoff", s.track_handoff ? 1 : 0) != 0;
  s.timing = c.get_bool("experiment.timing", false);
  return s;
}

NoiseConfig noise_from(const Config& c) {
  NoiseConfig n;
  const std::string dist = c.get_string("noise.distribution", "gaussian");
  if (dist != "gaussian")
    throw std::runtime_error("unknown noise.distribution '" + dist + "' (expected gaussian)");
  n.samples = c.get_int("noise.samples", 1);
  n.seed = c.get_u64("experiment.seed", 0);
  return n;  // eps is driven by the schedule
}

std::vector<double> stage_boundaries(const std::vector<IterationRecord>& rows) {
  std::vector<double> out;
  for (size_t i = 1; i < rows.size(); ++i)
    if (rows[i].stage != rows[i - 1].stage) out.push_back(static_cast<double>(rows[i].iter));
  return out;
}

PlotSpec rows_panel(const std::vector<IterationRecord>& rows, const std::string& title,
                    double IterationRecord::*field, const std::string& label) {
  PlotSpec p;
  p.title = title;
  p.y_label = label;
  p.vlines = stage_boundaries(rows);
  PlotSeries s;
  for (const auto& r : rows) {
    s.x.push_back(static_cast<double>(r.iter));
    s.y.push_back(r.*field);
  }
  p.series.push_back(std::move(s));
  return p;
}

void write_run_plot(const std::string& path, const std::vector<IterationRecord>& rows,
                    const std::string& name) {
  auto cost = rows_panel(rows, name + ": cost", &IterationRecord::cost, "cost");
  auto qu = rows_panel(rows, name + ": gradient stationarity", &IterationRecord::qu_inf,
                       "|Qu|_inf");
  write_svg(path, render_svg_stack({cost, qu}));
}

double eval_metric(const std::string& metric, const BuiltProblem& built, const Trajectory& raw,
                   double raw_cost) {
  if (metric == "goal_distance") return built.goal->goal_distance(raw.states.back());
  if (metric == "final_cost") return raw_cost;
  if (metric == "apex_distance") {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& x : raw.states)
      best = std::min(best, built.goal->goal_distance(x));
    return best;
  }
  throw std::runtime_error("unknown success.metric '" + metric + "'");
}

ExperimentResult run_single(const Config& resolved, const std::string& out_dir, bool plot);

// Sub-run config: base experiment defaults overridden by the parent's shared
// sections (seed, model, cost, solver, ...), keeping the base's own success
// declaration.
Config derive_sub_config(const Config& parent, const std::string& base_name) {
  Config sub;
  sub.set("experiment.name", base_name);
  for (const char* key : {"experiment.solver", "experiment.seed", "experiment.threads",
                          "experiment.timing"}) {
    if (parent.has(key)) sub.set(key, parent.get_string(key));
  }
  for (const auto& [key, value] : parent.items()) {
    const bool shared = key.rfind("model.", 0) == 0 || key.rfind("cost.", 0) == 0 ||
                        key.rfind("noise.", 0) == 0 || key.rfind("schedule.", 0) == 0 ||
                        key.rfind("solver.", 0) == 0 || key.rfind("zeroth.", 0) == 0;
    if (shared) sub.set(key, value);
  }
  return sub;
}

ExperimentResult run_sample_sweep(const Config& resolved, const std::string& out_dir,
                                  bool plot) {
  const Vec ms = resolved.get_vec("sweep.samples");
  if (ms.size() < 2) throw std::runtime_error("sample-sweep: need at least two sample counts");

  std::vector<IterationRecord> summary;
  std::vector<PlotSpec> panels(1);
  panels[0].title = "sample-sweep: cost per M";
  panels[0].y_label = "cost";
  ExperimentResult last_sub;
  double cost8 = -1.0, cost_max = -1.0;
  int m_largest = 0;

  for (Eigen::Index i = 0; i < ms.size(); ++i) {
    const int m = static_cast<int>(ms[i]);
    if (m < 1) throw std::runtime_error("sample-sweep: sample counts must be >= 1");
    Config sub = derive_sub_config(resolved, "cartpole-friction");
    sub.set("experiment.solver", "rddp");
    sub.set_int("noise.samples", m);
    const std::string sub_dir = out_dir + "/samples-" + std::to_string(m);
    ExperimentResult r = run_single(sub, sub_dir, plot);

    IterationRecord row;
    row.iter = static_cast<int>(i) + 1;
    row.stage = m;
    row.cost = r.final_cost;
    row.qu_inf = r.rows.empty() ? 0.0 : r.rows.back().qu_inf;
    row.qu_w = r.rows.empty() ? 0.0 : r.rows.back().qu_w;
    row.eps = resolved.get_double("schedule.eps0", 0.0);
    row.alpha_tol = r.rows.empty() ? 0.0 : r.rows.back().alpha_tol;
    row.dyn_evals = r.rows.empty() ? 0 : r.rows.back().dyn_evals;
    summary.push_back(row);

    PlotSeries s;
    s.label = "M=" + std::to_string(m);
    for (const auto& rr : r.rows) {
      s.x.push_back(static_cast<double>(rr.iter));
      s.y.push_back(rr.cost);
    }
    panels[0].series.push_back(std::move(s));

    if (m == 8) cost8 = r.final_cost;
    if (m > m_largest) {
      m_largest = m;
      cost_max = r.final_cost;
    }
    last_sub = std::move(r);
  }
  if (cost8 < 0.0) throw std::runtime_error("sample-sweep: sweep must include M=8");

  ExperimentResult result;
  result.resolved = resolved;
  result.rows = std::move(summary);
  result.trajectory = std::move(last_sub.trajectory);
  result.final_cost = cost_max;
  result.metric_name = resolved.get_string("success.metric");
  result.metric = (cost8 - cost_max) / cost8;  // relative improvement of largest M
  result.threshold = resolved.get_double("success.threshold");
  result.success = result.metric < result.threshold;
  result.exit_code = result.success ? 0 : 2;

  write_report_csv(out_dir + "/report.csv", result.rows);
  write_trajectory_csv(out_dir + "/trajectory.csv", result.trajectory,
                       resolved.get_double("model.dt"));
  write_text_file(out_dir + "/config.resolved", resolved.serialize());
  if (plot) write_svg(out_dir + "/plot.svg", render_svg_stack(panels, 760, 420));
  return result;
}

ExperimentResult run_schedule_compare(const Config& resolved, const std::string& out_dir,
                                      bool plot) {
  const char* solvers[] = {"ddp", "rddp-fixed", "rddp"};
  std::vector<ExperimentResult> subs;
  std::vector<IterationRecord> summary;
  std::vector<PlotSpec> panels(2);
  panels[0].title = "schedule-compare: cost";
  panels[0].y_label = "cost";
  panels[1].title = "schedule-compare: gradient stationarity";
  panels[1].y_label = "|Qu|_inf";

  for (int i = 0; i < 3; ++i) {
    Config sub = derive_sub_config(resolved, "cube-lift");
    sub.set("experiment.solver", solvers[i]);
    ExperimentResult r = run_single(sub, out_dir + "/" + solvers[i], plot);

    IterationRecord row;
    row.iter = i + 1;
    row.stage = i;
    row.cost = r.final_cost;
    row.qu_inf = r.rows.empty() ? 0.0 : r.rows.back().qu_inf;
    row.qu_w = r.rows.empty() ? 0.0 : r.rows.back().qu_w;
    row.eps = r.rows.empty() ? 0.0 : r.rows.back().eps;
    row.dyn_evals = r.rows.empty() ? 0 : r.rows.back().dyn_evals;
    summary.push_back(row);

    for (int pane = 0; pane < 2; ++pane) {
      PlotSeries s;
      s.label = solvers[i];
      for (const auto& rr : r.rows) {
        s.x.push_back(static_cast<double>(rr.iter));
        s.y.push_back(pane == 0 ? rr.cost : rr.qu_inf);
      }
      panels[pane].series.push_back(std::move(s));
    }
    subs.push_back(std::move(r));
  }

  const double cost_ddp = subs[0].final_cost;
  const double cost_fixed = subs[1].final_cost;
  const double cost_adaptive = subs[2].final_cost;
  const double qu_fixed = subs[1].rows.back().qu_inf;
  const double qu_adaptive = subs[2].rows.back().qu_inf;

  ExperimentResult result;
  result.resolved = resolved;
  result.rows = std::move(summary);
  result.trajectory = subs[2].trajectory;
  result.final_cost = cost_adaptive;
  result.metric_name = resolved.get_string("success.metric");
  result.metric = qu_fixed > 0.0 ? qu_adaptive / qu_fixed
                                 : std::numeric_limits<double>::infinity();
  result.threshold = resolved.get_double("success.threshold");
  result.success = result.metric < result.threshold && cost_adaptive < cost_ddp &&
                   cost_fixed < cost_ddp;
  result.exit_code = result.success ? 0 : 2;

  write_report_csv(out_dir + "/report.csv", result.rows);
  write_trajectory_csv(out_dir + "/trajectory.csv", result.trajectory,
                       resolved.get_double("model.dt"));
  write_text_file(out_dir + "/config.resolved", resolved.serialize());
  if (plot) write_svg(out_dir + "/plot.svg", render_svg_stack(panels, 760, 360));
  return result;
}

ExperimentResult run_single(const Config& resolved, const std::string& out_dir, bool plot) {
  const std::string name = resolved.get_string("experiment.name");
  const std::string solver_name = resolved.get_string("experiment.solver", "rddp");

  set_worker_threads(resolved.get_int("experiment.threads", 1));
  BuiltProblem built = build_problem(resolved);
  SolverSettings settings = solver_from(resolved);
  NoiseConfig noise = noise_from(resolved);

  const int N = resolved.get_int("model.horizon");
  VecList controls(static_cast<size_t>(N),
                   Vec::Zero(built.problem.dynamics->control_dim()));

  reset_dynamics_evals();
  std::vector<IterationRecord> rows;
  VecList final_controls;

  if (solver_name == "zeroth") {
    ZerothOrderSettings z;
    z.eps = resolved.get_double("zeroth.eps", resolved.get_double("schedule.eps0", 0.1));
    z.samples = resolved.get_int("zeroth.samples", 32);
    z.seed = resolved.get_u64("experiment.seed", 0);
    z.step_size = resolved.get_double("zeroth.step_size", 1e-3);
    z.max_iterations = resolved.get_int("zeroth.max_iterations", 500);
    z.tolerance = resolved.get_double("solver.tolerance", 0.0);
    z.timing = settings.timing;
    SolveReport rep = solve_zeroth(built.problem, controls, z);
    rows = std::move(rep.iterations);
    final_controls = std::move(rep.trajectory.controls);
  } else if (solver_name == "ddp" || solver_name == "rddp" || solver_name == "rddp-fixed") {
    AdaptiveSchedule sched = schedule_from(resolved);
    if (solver_name == "ddp") {
      sched.eps0 = 0.0;  // degenerate cascade == plain solve
      sched.eps_target = 0.0;
    } else if (solver_name == "rddp-fixed") {
      // One stage at fixed eps0, run at the cascade's final tolerance with
      // the whole iteration budget.
      sched.alpha0 = sched.resolved_alpha_target();
      sched.alpha_target = sched.alpha0;
      sched.eps_target = sched.eps0;
      sched.stall_budget = settings.max_iterations;
    }
    AdaptiveReport rep = solve_adaptive(built.problem, controls, sched, settings, noise);
    rows = std::move(rep.iterations);
    final_controls = std::move(rep.trajectory.controls);
  } else {
    throw std::runtime_error("unknown solver '" + solver_name +
                             "' (expected ddp, rddp, rddp-fixed or zeroth)");
  }

  // Task metrics are judged on the raw (noise-free) rollout of the returned
  // control sequence.
  Trajectory raw = rollout(*built.problem.dynamics, built.problem.initial_state,
                           final_controls);
  const double raw_cost = total_cost(built.problem, raw);

  ExperimentResult result;
  result.resolved = resolved;
  result.rows = std::move(rows);
  result.trajectory = std::move(raw);
  result.final_cost = raw_cost;
  result.metric_name = resolved.get_string("success.metric");
  result.metric = eval_metric(result.metric_name, built, result.trajectory, raw_cost);
  result.threshold = resolved.get_double("success.threshold");
  result.success = result.metric < result.threshold;
  result.exit_code = result.success ? 0 : 2;

  write_report_csv(out_dir + "/report.csv", result.rows);
  write_trajectory_csv(out_dir + "/trajectory.csv", result.trajectory, built.dt);
  write_text_file(out_dir + "/config.resolved", resolved.serialize());
  if (plot) write_run_plot(out_dir + "/plot.svg", result.rows, name + " (" + solver_name + ")");
  return result;
}

}  // namespace

const std::vector<ExperimentDescriptor>& experiment_registry() {
  static const std::vector<ExperimentDescriptor> registry = make_registry();
  return registry;
}

const ExperimentDescriptor& find_experiment(const std::string& name) {
  for (const auto& d : experiment_registry())
    if (d.name == name) return d;
  throw std::runtime_error("unknown experiment '" + name + "'; available: " + registry_names());
}

BuiltProblem build_problem(const Config& cfg) {
  const std::string type = cfg.get_string("model.type");
  BuiltProblem out;
  std::shared_ptr<const DynamicsModel> model;
  std::shared_ptr<const GoalMap> map;
  out.dt = cfg.get_double("model.dt");

  if (type == "pendulum") {
    PendulumParams p;
    p.mass = cfg.get_double("model.mass", p.mass);
    p.length = cfg.get_double("model.length", p.length);
    p.gravity = cfg.get_double("model.gravity", p.gravity);
    p.dt = out.dt;
    p.coulomb = cfg.get_double("model.coulomb", p.coulomb);
    p.v_stick = cfg.get_double("model.v_stick", p.v_stick);
    auto m = std::make_shared<Pendulum>(p);
    map = std::make_shared<FunctionMap>(2, 2, [m](const Vec& x) -> Vec {
      return m->tip_position(x);
    });
    model = m;
  } else if (type == "cartpole") {
    CartpoleParams p;
    p.cart_mass = cfg.get_double("model.cart_mass", p.cart_mass);
    p.pole_mass = cfg.get_double("model.pole_mass", p.pole_mass);
    p.pole_length = cfg.get_double("model.pole_length", p.pole_length);
    p.gravity = cfg.get_double("model.gravity", p.gravity);
    p.dt = out.dt;
    p.coulomb_cart = cfg.get_double("model.coulomb_cart", p.coulomb_cart);
    p.coulomb_pole = cfg.get_double("model.coulomb_pole", p.coulomb_pole);
    p.v_stick = cfg.get_double("model.v_stick", p.v_stick);
    auto m = std::make_shared<Cartpole>(p);
    map = std::make_shared<FunctionMap>(4, 2, [m](const Vec& x) -> Vec {
      return m->tip_position(x);
    });
    model = m;
  } else if (type == "double-pendulum") {
    DoublePendulumParams p;
    p.m1 = cfg.get_double("model.m1", p.m1);
    p.m2 = cfg.get_double("model.m2", p.m2);
    p.l1 = cfg.get_double("model.l1", p.l1);
    p.l2 = cfg.get_double("model.l2", p.l2);
    p.gravity = cfg.get_double("model.gravity", p.gravity);
    p.dt = out.dt;
    p.coulomb1 = cfg.get_double("model.coulomb1", p.coulomb1);
    p.coulomb2 = cfg.get_double("model.coulomb2", p.coulomb2);
    p.v_stick = cfg.get_double("model.v_stick", p.v_stick);
    auto m = std::make_shared<DoublePendulum>(p);
    map = std::make_shared<FunctionMap>(4, 2, [m](const Vec& x) -> Vec {
      return m->tip_position(x);
    });
    model = m;
  } else if (type == "cube") {
    CubeParams p;
    p.mass = cfg.get_double("model.mass", p.mass);
    p.gravity = cfg.get_double("model.gravity", p.gravity);
    p.mu = cfg.get_double("model.mu", p.mu);
    p.dt = out.dt;
    p.erp = cfg.get_double("model.erp", p.erp);
    p.contact_sweeps = cfg.get_int("model.contact_sweeps", p.contact_sweeps);
    p.contact_tol = cfg.get_double("model.contact_tol", p.contact_tol);
    p.contact_accept = cfg.get_double("model.contact_accept", p.contact_accept);
    model = std::make_shared<Cube>(p);
    map = std::make_shared<StateSliceMap>(4, 0, 2);
  } else if (type == "quadrotor2d") {
    Quadrotor2dParams p;
    p.mass = cfg.get_double("model.mass", p.mass);
    p.inertia = cfg.get_double("model.inertia", p.inertia);
    p.arm = cfg.get_double("model.arm", p.arm);
    p.skid_half_width = cfg.get_double("model.skid_half_width", p.skid_half_width);
    p.skid_drop = cfg.get_double("model.skid_drop", p.skid_drop);
    p.thrust_max = cfg.get_double("model.thrust_max", p.thrust_max);
    p.gravity = cfg.get_double("model.gravity", p.gravity);
    p.mu = cfg.get_double("model.mu", p.mu);
    p.dt = out.dt;
    p.erp = cfg.get_double("model.erp", p.erp);
    p.contact_sweeps = cfg.get_int("model.contact_sweeps", p.contact_sweeps);
    p.contact_tol = cfg.get_double("model.contact_tol", p.contact_tol);
    p.contact_accept = cfg.get_double("model.contact_accept", p.contact_accept);
    model = std::make_shared<Quadrotor2d>(p);
    map = std::make_shared<StateSliceMap>(6, 0, 2);
  } else if (type == "hopper") {
    HopperParams p;
    p.base_mass = cfg.get_double("model.base_mass", p.base_mass);
    p.thigh_mass = cfg.get_double("model.thigh_mass", p.thigh_mass);
    p.shank_mass = cfg.get_double("model.shank_mass", p.shank_mass);
    p.l1 = cfg.get_double("model.l1", p.l1);
    p.l2 = cfg.get_double("model.l2", p.l2);
    p.tau_max = cfg.get_double("model.tau_max", p.tau_max);
    p.hip_range = cfg.get_double("model.hip_range", p.hip_range);
    p.knee_range = cfg.get_double("model.knee_range", p.knee_range);
    p.stop_k = cfg.get_double("model.stop_k", p.stop_k);
    p.stop_d = cfg.get_double("model.stop_d", p.stop_d);
    p.gravity = cfg.get_double("model.gravity", p.gravity);
    p.mu = cfg.get_double("model.mu", p.mu);
    p.dt = out.dt;
    p.erp = cfg.get_double("model.erp", p.erp);
    p.contact_sweeps = cfg.get_int("model.contact_sweeps", p.contact_sweeps);
    p.contact_tol = cfg.get_double("model.contact_tol", p.contact_tol);
    p.contact_accept = cfg.get_double("model.contact_accept", p.contact_accept);
    model = std::make_shared<Hopper>(p);
    map = std::make_shared<StateSliceMap>(6, 0, 1);
  } else {
    throw std::runtime_error("unknown model.type '" + type + "'");
  }

  auto goal = std::make_shared<QuadraticGoalCost>();
  goal->map = map;
  goal->target = cfg.get_vec("cost.target");
  goal->w_p = cfg.get_double("cost.w_p", 1.0);
  goal->w_u = cfg.get_double("cost.w_u", 0.0);
  goal->w_run = cfg.get_double("cost.w_run", 0.0);
  goal->w_v = cfg.get_double("cost.w_v", 0.0);
  if (goal->target.size() != map->task_dim())
    throw std::runtime_error("cost.target dimension does not match the task map");

  out.problem.dynamics = model;
  out.problem.running_cost = goal->running();
  out.problem.terminal_cost = goal->terminal();
  out.problem.initial_state = cfg.get_vec("model.x0");
  out.problem.horizon = cfg.get_int("model.horizon");
  out.problem.validate();
  out.goal = goal;
  return out;
}

ExperimentResult run_experiment(const Config& overrides, const std::string& out_dir,
                                bool plot) {
  const std::string name = overrides.get_string("experiment.name");
  Config resolved = find_experiment(name).defaults;
  resolved.merge(overrides);

  std::filesystem::create_directories(out_dir);
  if (name == "sample-sweep") return run_sample_sweep(resolved, out_dir, plot);
  if (name == "schedule-compare") return run_schedule_compare(resolved, out_dir, plot);
  return run_single(resolved, out_dir, plot);
}

void compare_runs(const std::vector<std::string>& run_dirs, const std::string& out_dir) {
  if (run_dirs.size() < 2)
    throw std::runtime_error("compare: need at least two run directories");

  std::string experiment;
  std::vector<std::pair<std::string, std::vector<IterationRecord>>> runs;
  for (const auto& dir : run_dirs) {
    Config cfg = Config::parse_file(dir + "/config.resolved");
    const std::string name = cfg.get_string("experiment.name");
    if (experiment.empty())
      experiment = name;
    else if (name != experiment)
      throw std::runtime_error("compare: mismatched experiments '" + experiment + "' vs '" +
                               name + "' (" + dir + ")");
    std::string label = std::filesystem::path(dir).filename().string();
    if (label.empty()) label = dir;
    label += " (" + cfg.get_string("experiment.solver", "?") + ")";
    runs.emplace_back(label, read_report_csv(dir + "/report.csv"));
  }

  std::filesystem::create_directories(out_dir);

  std::string csv = std::string("label,") + kReportHeader + "\n";
  for (const auto& [label, rows] : runs)
    for (const auto& row : rows) csv += label + "," + report_row_line(row) + "\n";
  write_text_file(out_dir + "/compare.csv", csv);

  std::vector<PlotSpec> panels(2);
  panels[0].title = experiment + ": cost";
  panels[0].y_label = "cost";
  panels[1].title = experiment + ": gradient stationarity";
  panels[1].y_label = "|Qu|_inf";
  for (const auto& [label, rows] : runs) {
    for (int pane = 0; pane < 2; ++pane) {
      PlotSeries s;
      s.label = label;
      for (const auto& r : rows) {
        s.x.push_back(static_cast<double>(r.iter));
        s.y.push_back(pane == 0 ? r.cost : r.qu_inf);
      }
      panels[pane].series.push_back(std::move(s));
    }
  }
  write_svg(out_dir + "/compare.svg", render_svg_stack(panels, 760, 360));
}

}  // namespace rsoc
