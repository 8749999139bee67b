// pdef run        RMSE summary over many seeded runs
// pdef trajectory per-step estimates for a single seeded run

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pdef/bench.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kAllRunsFailed = 2;

struct Options {
  std::string filter = "all";
  std::string out;
  pdef::ExperimentConfig cfg;
};

void add_tuning(CLI::App& cmd, Options& o) {
  cmd.add_option("--particles", o.cfg.particles, "Particle count")->capture_default_str();
  cmd.add_option("--grid", o.cfg.pdef.grid_nodes, "Collocation nodes per PDEF grid")->capture_default_str();
  cmd.add_option("--state-quantiles", o.cfg.pdef.state_quantiles, "Posterior quantile points per step")
      ->capture_default_str();
  cmd.add_option("--noise-points", o.cfg.pdef.noise_points, "Process-noise quantile points")->capture_default_str();
  cmd.add_option("--velocity-bins", o.cfg.pdef.velocity_bins, "Velocity bins per step (0 = exact)")
      ->capture_default_str();
  cmd.add_option("--width-factor", o.cfg.pdef.width_factor, "Mollifier width in local node spacings")
      ->capture_default_str();
  cmd.add_flag("!--no-noise-split", o.cfg.pdef.split_noise,
               "Quantize the full process noise instead of sharing it with the mollifier");
  cmd.add_option("--ukf-alpha", o.cfg.ukf.alpha)->capture_default_str();
  cmd.add_option("--ukf-beta", o.cfg.ukf.beta)->capture_default_str();
  cmd.add_option("--ukf-kappa", o.cfg.ukf.kappa)->capture_default_str();
}

bool write_file(const std::string& path, const auto& writer) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot open " << path << " for writing\n";
    return false;
  }
  writer(f);
  return static_cast<bool>(f);
}

int run_command(Options& o) {
  const auto res = pdef::run_experiment(o.cfg);
  const auto header = pdef::config_line("run", o.cfg);
  if (!write_file(o.out, [&](std::ostream& os) { pdef::write_summary_csv(os, header, res); }) ||
      !write_file(o.out + ".runs.csv", [&](std::ostream& os) { pdef::write_runs_csv(os, header, res); })) {
    return kUsageError;
  }
  bool any_empty = false;
  for (const auto& r : res.reports) {
    std::fprintf(stderr, "%-5s ok=%zu failed=%zu mean_rmse=%s\n", pdef::to_string(r.filter).c_str(), r.runs_ok,
                 r.runs_failed, r.runs_ok ? pdef::format_number(r.mean).c_str() : "n/a");
    any_empty = any_empty || r.runs_ok == 0;
  }
  return any_empty ? kAllRunsFailed : 0;
}

int trajectory_command(Options& o) {
  o.cfg.runs = 1;
  o.cfg.validate();
  const auto trace = pdef::run_single(o.cfg, 0);
  const auto header = pdef::config_line("trajectory", o.cfg);
  if (!write_file(o.out, [&](std::ostream& os) { pdef::write_trajectory_csv(os, header, trace.records); })) {
    return kUsageError;
  }
  bool any_failed = false;
  for (const auto& outcome : trace.outcomes) {
    if (!outcome.ok) {
      std::fprintf(stderr, "%s failed: %s\n", pdef::to_string(outcome.filter).c_str(), outcome.reason.c_str());
      any_failed = true;
    }
  }
  return any_failed ? kAllRunsFailed : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Density evolution, particle and unscented filters on the growth benchmark"};
  app.require_subcommand(1);

  Options run_opts;
  auto* run = app.add_subcommand("run", "Multi-run RMSE experiment");
  run->add_option("--filter", run_opts.filter, "pdef, pf, ukf or all")->capture_default_str();
  run->add_option("--steps", run_opts.cfg.steps)->capture_default_str();
  run->add_option("--runs", run_opts.cfg.runs)->capture_default_str();
  run->add_option("--seed", run_opts.cfg.seed)->capture_default_str();
  run->add_option("--out", run_opts.out, "Summary CSV; per-run CSV goes to OUT.runs.csv")->required();
  add_tuning(*run, run_opts);

  Options traj_opts;
  traj_opts.cfg.seed = 7;
  auto* traj = app.add_subcommand("trajectory", "Per-step estimates for one trajectory");
  traj->add_option("--filter", traj_opts.filter, "pdef, pf, ukf or all")->capture_default_str();
  traj->add_option("--steps", traj_opts.cfg.steps)->capture_default_str();
  traj->add_option("--seed", traj_opts.cfg.seed)->capture_default_str();
  traj->add_option("--out", traj_opts.out, "Trajectory CSV")->required();
  add_tuning(*traj, traj_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  Options& o = run->parsed() ? run_opts : traj_opts;
  try {
    o.cfg.filters = pdef::parse_filters(o.filter);
    o.cfg.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return run->parsed() ? run_command(o) : trajectory_command(o);
}
