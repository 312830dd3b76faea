#pragma once

#include <optional>
#include <string>
#include <vector>

#include "east/dmrg.hpp"
#include "east/tebd.hpp"

namespace eastsim {

enum class Backend { Mps, Exact };
Backend backend_from_string(const std::string& s);

/// Named figure pipelines. Defaults come from the preset ("desk" keeps CI
/// runs in minutes, "paper" uses the published sizes and horizons); any
/// explicitly set field overrides the preset.
struct ExperimentConfig {
  std::string figure;        // fig1b | fig1c | fig2 | fig3a | fig3b | fig4
  std::string preset = "desk";

  int length = 0;            // 0 = preset default
  std::vector<int> drive_sizes;
  double mu_drive = 0.99;
  double mu_spacer = 2.0;
  std::optional<double> mu_drive_west;  // fig4 asymmetric case

  std::optional<std::string> init;      // pattern[@site:alpha] override
  double total_time = -1;    // < 0 = preset default
  double dt = -1;
  double record_interval = 1.0;
  int chi_max = 0;           // 0 = preset default
  double cutoff = 1e-10;

  // fig3a grid
  double rho_min = 1.0, rho_max = 5.0, rho_step = 1.0 / 3.0;
  // fig3b grid
  double mu_min = 0.2, mu_max = 2.0, mu_step = 0.2;

  Backend backend = Backend::Mps;
  std::string out_dir = ".";
  int workers = 1;

  /// Fill unset fields from the preset and check invariants.
  ExperimentConfig resolved() const;
};

ExperimentConfig load_experiment_config(const std::string& path);

/// Evolution through either backend, same recorded observables.
TimeSeries run_evolution(const ModelSpec& spec, const ProductStateSpec& init,
                         const TrotterSchedule& schedule, Backend backend);

struct Fig1bResult {
  std::vector<int> drive_sizes;
  std::vector<std::vector<double>> profiles;  // per D, <n_i>
  std::vector<LocalizationFit> fits;
};

struct Fig1cResult {
  std::vector<int> drive_sizes;
  std::vector<std::vector<double>> profiles;
  std::vector<double> mid_occupation;  // sum over sites N-1..N+2
};

Fig1bResult run_fig1b(const ExperimentConfig& config);
Fig1cResult run_fig1c(const ExperimentConfig& config);

struct Fig2Result {
  TimeSeries series;
};

Fig2Result run_fig2(const ExperimentConfig& config);

struct Fig3aRow {
  int drive_size = 0;
  double rho0 = 0.0;
  double mid_entropy = 0.0;  // S_{L/2} at T
  std::string status = "ok";
};

struct Fig3aResult {
  std::vector<Fig3aRow> rows;
};

Fig3aResult run_fig3a(const ExperimentConfig& config);

struct Fig3bRow {
  double mu = 0.0;
  double final_mid_entropy = 0.0;
  std::vector<double> mid_entropy_series;
  std::string status = "ok";
};

struct Fig3bResult {
  std::vector<double> times;
  std::vector<Fig3bRow> rows;
};

Fig3bResult run_fig3b(const ExperimentConfig& config);

struct Fig4Result {
  TimeSeries bipolar, east, west;
  double residual = 0.0;  // relative L2 of S_bi - (S_e + S_w)
};

Fig4Result run_fig4(const ExperimentConfig& config);

/// Relative L2 residual between a curve and the sum of two components,
/// skipping the t = 0 row.
double superposition_residual(const std::vector<double>& combined,
                              const std::vector<double>& part_a,
                              const std::vector<double>& part_b);

/// Self-contained python plot scripts referencing the CSVs in the
/// results directory.
void emit_plots(const std::string& results_dir);

double pearson_correlation(const std::vector<double>& a,
                           const std::vector<double>& b);

/// Indices of strict interior local maxima.
std::vector<int> local_maxima(const std::vector<double>& values);

}  // namespace eastsim
