#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsoc/config.hpp"
#include "rsoc/experiments.hpp"

namespace {

std::string default_out_root() {
  const char* env = std::getenv("RSOC_OUT");
  return env && *env ? env : "runs";
}

int cmd_run(const std::string& experiment, const std::string& config_path,
            const std::vector<std::pair<std::string, std::string>>& overrides,
            std::string out_dir, bool plot) {
  rsoc::Config cfg;
  if (!config_path.empty()) cfg = rsoc::Config::parse_file(config_path);
  cfg.set("experiment.name", experiment);
  for (const auto& [key, value] : overrides) cfg.set(key, value);

  if (out_dir.empty()) {
    out_dir = default_out_root() + "/" + experiment + "-" +
              cfg.get_string("experiment.solver",
                             rsoc::find_experiment(experiment)
                                 .defaults.get_string("experiment.solver"));
  }

  rsoc::ExperimentResult res = rsoc::run_experiment(cfg, out_dir, plot);
  std::printf("experiment:  %s\n", experiment.c_str());
  std::printf("output:      %s\n", out_dir.c_str());
  std::printf("iterations:  %zu\n", res.rows.size());
  std::printf("final cost:  %s\n", rsoc::format_double(res.final_cost).c_str());
  std::printf("%s:  %s (threshold %s) -> %s\n", res.metric_name.c_str(),
              rsoc::format_double(res.metric).c_str(),
              rsoc::format_double(res.threshold).c_str(),
              res.success ? "success" : "threshold missed");
  return res.exit_code;
}

int cmd_list() {
  for (const auto& d : rsoc::experiment_registry())
    std::printf("%-22s %s\n", d.name.c_str(), d.summary.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trajectory optimization benchmarks: smoothed DDP vs. baselines"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run one experiment and write its reports");
  std::string experiment, config_path, out_dir, solver;
  int samples = -1, seed = -1, threads = -1;
  double eps = -1.0, eps_target = -1.0, rho = -1.0, gamma = -1.0;
  bool plot = false;
  run->add_option("experiment", experiment, "registry name (see `rsoc list`)")->required();
  run->add_option("--solver", solver, "ddp | rddp | rddp-fixed | zeroth");
  run->add_option("--samples", samples, "Monte-Carlo samples per control");
  run->add_option("--eps", eps, "initial smoothing noise (0 disables smoothing)");
  run->add_option("--eps-target", eps_target, "noise level that ends the cascade");
  run->add_option("--rho", rho, "noise shrink factor per stage");
  run->add_option("--gamma", gamma, "tolerance shrink factor per stage");
  run->add_option("--seed", seed, "RNG seed");
  run->add_option("--threads", threads, "worker thread cap");
  run->add_option("--out", out_dir, "output directory (default $RSOC_OUT/<name>-<solver>)");
  run->add_option("--config", config_path, "config file overriding registry defaults");
  run->add_flag("--plot", plot, "also write plot.svg");

  // list
  app.add_subcommand("list", "list registry experiments");

  // compare
  auto* cmp = app.add_subcommand("compare", "overlay reports from finished runs");
  std::vector<std::string> run_dirs;
  std::string cmp_out;
  cmp->add_option("dirs", run_dirs, "run directories (>= 2, same experiment)")->required();
  cmp->add_option("--out", cmp_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list")) return cmd_list();
    if (app.got_subcommand("compare")) {
      rsoc::compare_runs(run_dirs, cmp_out);
      std::printf("wrote %s/compare.csv and compare.svg\n", cmp_out.c_str());
      return 0;
    }

    std::vector<std::pair<std::string, std::string>> overrides;
    if (!solver.empty()) overrides.emplace_back("experiment.solver", solver);
    if (samples >= 0) overrides.emplace_back("noise.samples", std::to_string(samples));
    if (eps >= 0.0) overrides.emplace_back("schedule.eps0", rsoc::format_double(eps));
    if (eps_target >= 0.0)
      overrides.emplace_back("schedule.eps_target", rsoc::format_double(eps_target));
    if (rho > 0.0) overrides.emplace_back("schedule.rho", rsoc::format_double(rho));
    if (gamma > 0.0) overrides.emplace_back("schedule.gamma", rsoc::format_double(gamma));
    if (seed >= 0) overrides.emplace_back("experiment.seed", std::to_string(seed));
    if (threads > 0) overrides.emplace_back("experiment.threads", std::to_string(threads));
    return cmd_run(experiment, config_path, overrides, out_dir, plot);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
