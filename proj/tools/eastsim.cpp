// Command-line front end: ground-state search, time evolution, parameter
// scans, figure pipelines, and oracle cross-checks.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error,
// 3 solver non-convergence, 4 hard bond-dimension cap saturation.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <optional>

#include "east/ed.hpp"
#include "east/experiments.hpp"
#include "east/io.hpp"
#include "east/version.hpp"

using namespace eastsim;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitNoConvergence = 3;
constexpr int kExitCapSaturated = 4;

struct CommonOpts {
  std::string kind = "heterojunction";
  int length = 16;
  int drive = 3;
  double mu_drive = 0.99;
  double mu_spacer = 2.0;
  int chi_max = 256;
  double cutoff = 1e-10;
  std::string out = "results";
};

void add_model_flags(CLI::App* app, CommonOpts& o) {
  app->add_option("--kind", o.kind, "chain kind: east | west | heterojunction");
  app->add_option("--L", o.length, "chain length");
  app->add_option("--D", o.drive, "drive size");
  app->add_option("--mu-drive", o.mu_drive, "drive-region chemical potential");
  app->add_option("--mu-spacer", o.mu_spacer, "spacer chemical potential");
  app->add_option("--chi-max", o.chi_max, "bond-dimension cap");
  app->add_option("--cutoff", o.cutoff, "relative Schmidt-value cutoff");
  app->add_option("--out", o.out, "output directory");
}

ModelSpec model_from(const CommonOpts& o) {
  return make_model(chain_kind_from_string(o.kind), o.length, o.drive,
                    o.mu_drive, o.mu_spacer);
}

int run_ground(const CommonOpts& o, const std::string& pin_name) {
  const auto spec = model_from(o);
  DmrgParams params;
  params.pin = pin_name.empty() ? default_pin(spec.kind)
                                : pin_mode_from_string(pin_name);
  params.chi_schedule = {16, 32, std::min(64, o.chi_max)};
  params.cutoff = o.cutoff;
  auto res = dmrg_ground(spec, params);

  ensure_directory(o.out);
  std::vector<double> occ(o.length);
  for (int i = 1; i <= o.length; ++i) occ[i - 1] = res.state.expect_occupation(i);
  write_profile_csv(o.out + "/ground_profile.csv", occ);
  std::map<std::string, std::string> meta{
      {"kind", to_string(spec.kind)},
      {"length", std::to_string(o.length)},
      {"drive_size", std::to_string(o.drive)},
      {"mu_drive", format_double(o.mu_drive)},
      {"mu_spacer", format_double(o.mu_spacer)},
      {"pin", to_string(params.pin)},
      {"energy", format_double(res.energy)},
      {"converged", res.converged ? "true" : "false"},
      {"sweeps", std::to_string(res.log.size())},
      {"code_version", kVersion},
  };
  write_metadata_json(o.out + "/ground_profile.meta.json", meta);
  std::printf("energy %.12f after %zu sweeps (%s)\n", res.energy,
              res.log.size(), res.converged ? "converged" : "NOT converged");
  return res.converged ? 0 : kExitNoConvergence;
}

int run_evolve(const CommonOpts& o, const std::string& init_str, double dt,
               double total_time, double record_interval, int order,
               const std::string& backend_str,
               const std::string& checkpoint_path) {
  const auto spec = model_from(o);
  ProductStateSpec init;
  if (init_str.empty()) {
    init.pattern.assign(o.length, '0');
    for (int i = 0; i < o.drive && i < o.length; ++i) init.pattern[i] = '1';
  } else {
    init = parse_state_spec(init_str);
  }
  TrotterSchedule sched;
  sched.dt = dt;
  sched.order = order;
  sched.total_time = total_time;
  sched.record_interval = record_interval;
  sched.chi_max = o.chi_max;
  sched.cutoff = o.cutoff;

  ensure_directory(o.out);
  TimeSeries ts;
  if (backend_from_string(backend_str) == Backend::Exact) {
    ts = run_evolution(spec, init, sched, Backend::Exact);
  } else {
    Mps mps = Mps::from_product(init);
    EvolveOptions opts;
    if (!checkpoint_path.empty()) {
      opts.checkpoint_path = checkpoint_path;
      opts.checkpoint_interval = 60.0;
    }
    ts = evolve_inplace(mps, spec, sched, opts);
  }
  ts.metadata["initial_state"] = to_string(init);
  write_timeseries_csv(o.out + "/evolve_timeseries.csv", ts, o.length);
  write_metadata_json(o.out + "/evolve_timeseries.meta.json", ts.metadata);
  std::printf("recorded %d rows to %s/evolve_timeseries.csv\n", ts.rows(),
              o.out.c_str());
  return 0;
}

int run_validate(int max_length) {
  // Small oracle cross-check: DMRG energy vs exact diagonalization, and
  // MPS evolution vs the Krylov propagator.
  int failures = 0;
  for (auto kind :
       {ChainKind::East, ChainKind::West, ChainKind::Heterojunction}) {
    for (int len : {6, 8, 10, 12}) {
      if (len > max_length) continue;
      const int d = std::min(3, len / 2);
      const auto spec = make_model(kind, len, d, 0.99, 2.0);
      DmrgParams params;
      params.pin = default_pin(kind);
      const auto exact = ground_state_exact(spec, params.pin);
      const auto dmrg = dmrg_ground(spec, params);
      const double de = std::abs(dmrg.energy - exact.energy);
      const bool ok_ground = dmrg.converged && de < 1e-8;

      ProductStateSpec init;
      init.pattern.assign(len, '0');
      for (int i = 0; i < d; ++i)
        init.pattern[kind == ChainKind::West ? len - 1 - i : i] = '1';
      TrotterSchedule sched;
      sched.dt = 0.1;
      sched.order = 4;
      sched.total_time = 10.0;
      sched.record_interval = 10.0;
      sched.cutoff = 1e-14;
      const auto mps_ts = run_evolution(spec, init, sched, Backend::Mps);
      const auto ed_ts = run_evolution(spec, init, sched, Backend::Exact);
      double obs_err = 0.0;
      for (int i = 0; i < len; ++i)
        obs_err = std::max(obs_err, std::abs(mps_ts.occupation.back()[i] -
                                             ed_ts.occupation.back()[i]));
      const bool ok_evolve = obs_err < 1e-6;
      if (!ok_ground || !ok_evolve) ++failures;
      std::printf("%-15s L=%-2d  |dE|=%.2e %s  obs_err=%.2e %s\n",
                  to_string(kind).c_str(), len, de, ok_ground ? "ok" : "FAIL",
                  obs_err, ok_evolve ? "ok" : "FAIL");
    }
  }
  return failures == 0 ? 0 : kExitRuntime;
}

// Overlay: config-file values win over flags, per the interface contract.
ExperimentConfig overlay_config(ExperimentConfig base,
                                const std::string& config_path) {
  if (config_path.empty()) return base;
  const auto file = load_experiment_config(config_path);
  // Fields absent from the file keep their parser defaults, which match
  // the struct defaults; copy everything the file may carry.
  base = file;
  return base;
}

int run_figure(const std::string& id, ExperimentConfig cfg) {
  cfg.figure = id;
  if (id == "fig1b")
    run_fig1b(cfg);
  else if (id == "fig1c")
    run_fig1c(cfg);
  else if (id == "fig2")
    run_fig2(cfg);
  else if (id == "fig3a")
    run_fig3a(cfg);
  else if (id == "fig3b")
    run_fig3b(cfg);
  else if (id == "fig4")
    run_fig4(cfg);
  else
    throw CLI::ValidationError("unknown figure id: " + id);
  emit_plots(cfg.resolved().out_dir);
  std::printf("figure %s written to %s\n", id.c_str(),
              cfg.resolved().out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum East/West heterojunction simulator"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonOpts opts;
  std::string pin_name;
  std::string init_str;
  std::string backend_str = "mps";
  std::string checkpoint_path;
  std::string config_path;
  std::string figure_id;
  std::string preset = "desk";
  double dt = 0.05, total_time = 100.0, record_interval = 1.0;
  int order = 2;
  int workers = 1;
  int validate_max_length = 10;

  auto* ground = app.add_subcommand("ground", "DMRG ground-state search");
  add_model_flags(ground, opts);
  ground->add_option("--pin", pin_name,
                     "pin mode: none | left | right | both (default by kind)");

  auto* evolve_cmd = app.add_subcommand("evolve", "TEBD / exact time evolution");
  add_model_flags(evolve_cmd, opts);
  evolve_cmd->add_option("--init", init_str, "pattern[@site:alpha]");
  evolve_cmd->add_option("--dt", dt, "Trotter step");
  evolve_cmd->add_option("--T", total_time, "total evolution time");
  evolve_cmd->add_option("--record-interval", record_interval,
                         "observable recording interval");
  evolve_cmd->add_option("--order", order, "Trotter order: 1, 2 or 4");
  evolve_cmd->add_option("--backend", backend_str, "mps | exact");
  evolve_cmd->add_option("--checkpoint", checkpoint_path,
                         "snapshot path (written every 60s of wall clock)");

  auto add_experiment_flags = [&](CLI::App* cmd, ExperimentConfig& cfg) {
    cmd->add_option("--preset", cfg.preset, "desk | paper");
    cmd->add_option("--L", cfg.length, "chain length (0 = preset default)");
    cmd->add_option("--D", cfg.drive_sizes, "drive sizes");
    cmd->add_option("--mu-drive", cfg.mu_drive, "drive potential");
    cmd->add_option("--mu-spacer", cfg.mu_spacer, "spacer potential");
    cmd->add_option("--dt", cfg.dt, "Trotter step (< 0 = preset default)");
    cmd->add_option("--T", cfg.total_time,
                    "total time (< 0 = preset default)");
    cmd->add_option("--chi-max", cfg.chi_max, "bond-dimension cap");
    cmd->add_option("--cutoff", cfg.cutoff, "Schmidt-value cutoff");
    cmd->add_option("--init", cfg.init, "initial state override");
    cmd->add_option("--backend", backend_str, "mps | exact");
    cmd->add_option("--out", cfg.out_dir, "output directory");
    cmd->add_option("--workers", cfg.workers, "parallel grid workers");
    cmd->add_option("--config", config_path,
                    "JSON config; file values override flags");
  };

  ExperimentConfig scan_cfg;
  auto* scan = app.add_subcommand("scan", "parameter scans (fig3a / fig3b)");
  scan->add_option("--figure", scan_cfg.figure, "fig3a | fig3b")->required();
  add_experiment_flags(scan, scan_cfg);

  ExperimentConfig fig_cfg;
  auto* figure = app.add_subcommand("figure", "named figure pipeline");
  figure->add_option("id", figure_id, "fig1b | fig1c | fig2 | fig3a | fig3b | fig4")
      ->required();
  add_experiment_flags(figure, fig_cfg);

  auto* validate =
      app.add_subcommand("validate", "oracle cross-checks at small sizes");
  validate->add_option("--max-L", validate_max_length,
                       "largest chain length to check (<= 12)");
  (void)preset;
  (void)workers;

  CLI11_PARSE(app, argc, argv);

  try {
    if (ground->parsed()) return run_ground(opts, pin_name);
    if (evolve_cmd->parsed())
      return run_evolve(opts, init_str, dt, total_time, record_interval, order,
                        backend_str, checkpoint_path);
    if (scan->parsed()) {
      scan_cfg.backend = backend_from_string(backend_str);
      auto cfg = overlay_config(scan_cfg, config_path);
      return run_figure(cfg.figure, cfg);
    }
    if (figure->parsed()) {
      fig_cfg.backend = backend_from_string(backend_str);
      auto cfg = overlay_config(fig_cfg, config_path);
      return run_figure(figure_id, cfg);
    }
    if (validate->parsed()) return run_validate(validate_max_length);
  } catch (const CapSaturatedError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCapSaturated;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
