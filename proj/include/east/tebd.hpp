#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "east/model.hpp"
#include "east/mps.hpp"

namespace eastsim {

struct TrotterSchedule {
  double dt = 0.05;
  int order = 2;
  double total_time = 0.0;
  double record_interval = 1.0;
  int chi_max = 256;
  double cutoff = 1e-10;
  int hard_chi_cap = 1024;  // saturation beyond this aborts the run

  void validate() const;
  int steps_per_record() const;
  int record_count() const;  // excluding t = 0
};

/// Thrown when the evolved bond dimension reaches the hard cap.
struct CapSaturatedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BondGate {
  int bond = 0;
  Matrix4c gate = Matrix4c::Identity();
};

/// Trotter layers of exp(-i h_r tau). Order 2 uses half-step odd layers
/// around a full even layer.
struct BondGateSet {
  int order = 1;
  double dt = 0.0;
  std::vector<BondGate> odd_full;   // tau = dt
  std::vector<BondGate> odd_half;   // tau = dt/2 (order 2 only)
  std::vector<BondGate> even_full;  // tau = dt
};

BondGateSet make_trotter_layers(const ModelSpec& spec, double dt, int order);

struct TimeSeries {
  std::vector<double> times;
  std::vector<std::vector<double>> occupation;  // per time, length L
  std::vector<std::vector<double>> entropy;     // per time, length L-1
  std::vector<double> energy;
  std::vector<double> norm;
  std::vector<double> discarded;  // cumulative
  std::map<std::string, std::string> metadata;

  int rows() const { return static_cast<int>(times.size()); }
  std::vector<double> column_mid_entropy(int length) const;
  std::vector<double> column_occupation(int site) const;
};

struct EvolveOptions {
  std::string checkpoint_path;      // empty = no checkpoints
  double checkpoint_interval = 0.0; // wall-clock seconds between snapshots
};

/// Second-order Trotter evolution with observable recording every
/// record_interval. Throws on hard bond-dimension saturation.
TimeSeries evolve(Mps mps, const ModelSpec& spec, const TrotterSchedule& schedule,
                  const EvolveOptions& options = {});

/// As evolve, but leaves the final state in `mps`.
TimeSeries evolve_inplace(Mps& mps, const ModelSpec& spec,
                          const TrotterSchedule& schedule,
                          const EvolveOptions& options = {});

struct ConvergenceRow {
  double dt = 0.0;
  double max_occupation_diff = 0.0;  // vs finest step at matched times
  double mid_entropy_diff = 0.0;
};

/// Self-convergence of the Trotter step: each dt is compared against the
/// finest one on the shared record grid.
std::vector<ConvergenceRow> trotter_convergence_check(
    const ModelSpec& spec, const ProductStateSpec& init, double total_time,
    std::vector<double> dt_list, int chi_max = 256, double cutoff = 1e-10);

}  // namespace eastsim
